#pragma once

// Brute-force reference computations for tests. Deliberately naive: every
// lag and index is evaluated with explicit modular arithmetic and nothing is
// shared with the library's correlation path.

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

inline std::size_t wrap(long long v, std::size_t n) {
  const long long m = static_cast<long long>(n);
  return static_cast<std::size_t>(((v % m) + m) % m);
}

inline double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

/// max_d |sum_k a[k] b[(k+d) mod n]| / (|a||b|)
inline double max_cyclic_xcorr(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  double best = 0.0;
  for (std::size_t d = 0; d < n; ++d) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += a[k] * b[wrap(static_cast<long long>(k + d), n)];
    best = std::max(best, std::abs(s));
  }
  return best / (norm(a) * norm(b));
}

/// Raw correlation summed over frames: sum_f sum_p y[f n + p] c[(p - d) mod n],
/// normalized by the norm of the per-sample frame sums and of the code.
inline std::vector<double> framewise_correlation(const std::vector<double>& y,
                                                 const std::vector<double>& code) {
  const std::size_t n = code.size();
  const std::size_t frames = y.size() / n;
  std::vector<double> raw(n, 0.0);
  for (std::size_t f = 0; f < frames; ++f)
    for (std::size_t d = 0; d < n; ++d)
      for (std::size_t p = 0; p < n; ++p)
        raw[d] += y[f * n + p] * code[wrap(static_cast<long long>(p) - static_cast<long long>(d), n)];

  std::vector<double> sums(n, 0.0);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t f = 0; f < frames; ++f) sums[p] += y[f * n + p];
  const double denom = norm(sums) * norm(code);
  for (double& v : raw) v /= denom;
  return raw;
}

inline std::size_t argmax(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

/// Delayed bipolar code laid over a frame with no host: y[p] = c[(p - d) mod n].
inline std::vector<double> delayed(const std::vector<double>& code, long long d) {
  const std::size_t n = code.size();
  std::vector<double> y(n);
  for (std::size_t p = 0; p < n; ++p) y[p] = code[wrap(static_cast<long long>(p) - d, n)];
  return y;
}

} // namespace oracle
