#include "delayfp/embedder.hpp"

#include <cmath>

#include "delayfp/error.hpp"

namespace delayfp {

std::string_view to_string(Scheme s) {
  return s == Scheme::original ? "original" : "improved";
}

Scheme parse_scheme(std::string_view s) {
  if (s == "original") return Scheme::original;
  if (s == "improved") return Scheme::improved;
  fail(Errc::invalid_argument, "unknown scheme '" + std::string(s) + "'");
}

namespace {

void check_frame_args(std::span<const double> x, std::span<const double> code, int delay) {
  require(x.size() == code.size(), "embed: frame length differs from code length");
  require(delay >= 0 && static_cast<std::size_t>(delay) < x.size(), "embed: delay out of range");
}

// Chip of a code delayed by d at frame position p: code[(p - d) mod n].
inline double chip_at(std::span<const double> code, std::size_t p, std::size_t d) {
  return p >= d ? code[p - d] : code[p + code.size() - d];
}

// y = x + alpha*|x|*chips. Rounding is steered toward x so that
// |y - x| never exceeds |alpha*|x|*chips| in floating point.
inline double perturb(double x, double chips, double alpha) {
  const double delta = alpha * std::abs(x) * chips;
  double y = x + delta;
  while (std::abs(y - x) > std::abs(delta)) y = std::nextafter(y, x);
  return y;
}

void embed_into(std::span<const double> x, std::span<const double> code, int delay,
                const SyncCode* sync, double alpha, std::span<double> out) {
  const auto d = static_cast<std::size_t>(delay);
  for (std::size_t p = 0; p < x.size(); ++p) {
    double chips = chip_at(code, p, d);
    if (sync) chips += chip_at(sync->samples, p, static_cast<std::size_t>(sync->base_delay));
    out[p] = perturb(x[p], chips, alpha);
  }
}

} // namespace

std::vector<double> embed_frame_original(std::span<const double> x,
                                         const FingerprintCode& code, int delay,
                                         double alpha) {
  check_frame_args(x, code.samples, delay);
  std::vector<double> y(x.size());
  embed_into(x, code.samples, delay, nullptr, alpha, y);
  return y;
}

std::vector<double> embed_frame_improved(std::span<const double> x,
                                         const FingerprintCode& code, int delay,
                                         const SyncCode& sync, double alpha) {
  check_frame_args(x, code.samples, delay);
  check_frame_args(x, sync.samples, sync.base_delay);
  std::vector<double> y(x.size());
  embed_into(x, code.samples, delay, &sync, alpha, y);
  return y;
}

Signal embed_stream(const Signal& x, const EmbedSpec& spec, const Codebook& codebook) {
  spec.params.validate();
  const auto n = static_cast<std::size_t>(spec.params.frame);
  require(codebook.n == spec.params.frame, "embed: codebook length differs from frame length");
  require(codebook.groups() == spec.params.groups, "embed: codebook group count differs from scheme");
  if (x.size() < n) fail(Errc::invalid_argument, "embed: signal shorter than one frame");

  const UserAssignment who = user_to_params(spec.user, spec.params);
  const FingerprintCode& code = codebook.codes[static_cast<std::size_t>(who.group)];

  Signal y = x;
  const std::size_t frames = x.size() / n;
  for (std::size_t f = 0; f < frames; ++f) {
    std::span<const double> in(x.samples.data() + f * n, n);
    std::span<double> out(y.samples.data() + f * n, n);
    embed_into(in, code.samples, who.delay,
               spec.scheme == Scheme::improved ? &codebook.sync : nullptr, spec.params.alpha, out);
  }
  return y;
}

} // namespace delayfp
