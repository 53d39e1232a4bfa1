#include "delayfp/detector.hpp"

#include <algorithm>
#include <cmath>

#include "delayfp/error.hpp"

namespace delayfp {

double ThresholdPolicy::threshold(std::span<const double> values) const {
  if (values.empty()) return floor_abs;
  std::vector<double> mags(values.size());
  std::transform(values.begin(), values.end(), mags.begin(),
                 [](double v) { return std::abs(v); });
  const std::size_t mid = mags.size() / 2;
  std::nth_element(mags.begin(), mags.begin() + mid, mags.end());
  double median = mags[mid];
  if (mags.size() % 2 == 0) {
    const double lower = *std::max_element(mags.begin(), mags.begin() + mid);
    median = (median + lower) / 2.0;
  }
  return std::max(kappa * median, floor_abs);
}

std::vector<double> fold_frames(std::span<const double> y, int n) {
  require(n >= 1, "fold: frame length must be positive");
  const auto len = static_cast<std::size_t>(n);
  require(y.size() >= len, "fold: signal shorter than one frame");
  std::vector<double> acc(len, 0.0);
  const std::size_t frames = y.size() / len;
  for (std::size_t f = 0; f < frames; ++f)
    for (std::size_t m = 0; m < len; ++m) acc[m] += y[f * len + m];
  return acc;
}

CorrelationProfile correlate_all_lags(std::span<const double> accumulator,
                                      std::span<const double> code, int code_id) {
  require(accumulator.size() == code.size() && !code.empty(),
          "correlate: accumulator and code lengths differ");
  double acc_energy = 0.0, code_energy = 0.0;
  for (double v : accumulator) acc_energy += v * v;
  for (double v : code) code_energy += v * v;
  require(acc_energy > 0.0, "correlate: zero-norm accumulator");
  require(code_energy > 0.0, "correlate: zero-norm code");
  const double denom = std::sqrt(acc_energy) * std::sqrt(code_energy);

  // values[d] = sum_p A[p] c[(p - d) mod n] = sum_q c[q] A[(q + d) mod n]
  const std::size_t n = code.size();
  std::vector<double> doubled(2 * n);
  std::copy(accumulator.begin(), accumulator.end(), doubled.begin());
  std::copy(accumulator.begin(), accumulator.end(), doubled.begin() + static_cast<std::ptrdiff_t>(n));

  CorrelationProfile profile{code_id, std::vector<double>(n)};
  for (std::size_t d = 0; d < n; ++d) {
    const double* a = doubled.data() + d;
    double sum = 0.0;
    for (std::size_t q = 0; q < n; ++q) sum += code[q] * a[q];
    profile.values[d] = sum / denom;
  }
  return profile;
}

std::vector<Peak> find_peaks(const CorrelationProfile& profile, const ThresholdPolicy& policy) {
  const auto& v = profile.values;
  const int n = static_cast<int>(v.size());
  const double thr = policy.threshold(v);

  std::vector<int> order;
  for (int d = 0; d < n; ++d)
    if (v[static_cast<std::size_t>(d)] >= thr && v[static_cast<std::size_t>(d)] > 0.0)
      order.push_back(d);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return v[static_cast<std::size_t>(a)] > v[static_cast<std::size_t>(b)];
  });

  std::vector<Peak> peaks;
  for (int lag : order) {
    const bool suppressed = std::any_of(peaks.begin(), peaks.end(), [&](const Peak& p) {
      const int dist = std::abs(p.lag - lag);
      return std::min(dist, n - dist) <= policy.tolerance;
    });
    if (!suppressed) peaks.push_back({lag, v[static_cast<std::size_t>(lag)]});
  }
  return peaks;
}

namespace {

// Empty when the signal holds no complete frame or folds to silence.
std::optional<std::vector<double>> usable_accumulator(const Signal& y, int n) {
  if (y.size() < static_cast<std::size_t>(n)) return std::nullopt;
  auto acc = fold_frames(y.samples, n);
  if (std::all_of(acc.begin(), acc.end(), [](double v) { return v == 0.0; }))
    return std::nullopt;
  return acc;
}

void collect_hits(TraceReport& report, std::span<const double> acc, const Codebook& codebook,
                  const SchemeParams& params, const ThresholdPolicy& policy) {
  const int n = params.frame;
  for (const auto& code : codebook.codes) {
    const auto profile = correlate_all_lags(acc, code.samples, code.group_id);
    for (const auto& peak : find_peaks(profile, policy)) {
      DetectionHit hit;
      hit.group_id = code.group_id;
      hit.detected_delay = peak.lag;
      hit.corrected_delay = ((peak.lag - report.offset) % n + n) % n;
      hit.score = peak.score;
      if (auto j = delay_to_index(hit.corrected_delay, params, policy.tolerance)) {
        hit.user = params_to_user(code.group_id, *j, params);
        report.traced_users.push_back(*hit.user);
      }
      report.hits.push_back(hit);
    }
  }
  std::sort(report.traced_users.begin(), report.traced_users.end());
  report.traced_users.erase(std::unique(report.traced_users.begin(), report.traced_users.end()),
                            report.traced_users.end());
}

void check_detect_args(const Codebook& codebook, const SchemeParams& params) {
  params.validate();
  require(codebook.n == params.frame, "detect: codebook length differs from frame length");
  require(codebook.groups() == params.groups, "detect: codebook group count differs from scheme");
}

} // namespace

TraceReport detect_original(const Signal& y, const Codebook& codebook,
                            const SchemeParams& params, const ThresholdPolicy& policy) {
  check_detect_args(codebook, params);
  TraceReport report;
  report.scheme = Scheme::original;
  if (auto acc = usable_accumulator(y, params.frame))
    collect_hits(report, *acc, codebook, params, policy);
  return report;
}

TraceReport detect_improved(const Signal& y, const Codebook& codebook,
                            const SchemeParams& params, const ThresholdPolicy& policy) {
  check_detect_args(codebook, params);
  require(static_cast<int>(codebook.sync.samples.size()) == params.frame,
          "detect: codebook has no sync code");
  TraceReport report;
  report.scheme = Scheme::improved;
  auto acc = usable_accumulator(y, params.frame);
  if (!acc) {
    report.sync_missing = true;
    return report;
  }

  const int n = params.frame;
  const auto sync_profile = correlate_all_lags(*acc, codebook.sync.samples, kSyncCodeId);
  const auto sync_peaks = find_peaks(sync_profile, policy);
  if (sync_peaks.empty()) {
    report.sync_missing = true;
  } else {
    report.sync_detected_delay = sync_peaks.front().lag;
    report.offset = ((sync_peaks.front().lag - codebook.sync.base_delay) % n + n) % n;
  }
  collect_hits(report, *acc, codebook, params, policy);
  return report;
}

TraceReport detect(Scheme scheme, const Signal& y, const Codebook& codebook,
                   const SchemeParams& params, const ThresholdPolicy& policy) {
  return scheme == Scheme::original ? detect_original(y, codebook, params, policy)
                                    : detect_improved(y, codebook, params, policy);
}

nlohmann::json to_json(const TraceReport& report) {
  nlohmann::json j;
  j["scheme"] = std::string(to_string(report.scheme));
  j["sync_detected_delay"] = report.sync_detected_delay ? nlohmann::json(*report.sync_detected_delay)
                                                        : nlohmann::json(nullptr);
  j["sync_missing"] = report.sync_missing;
  j["offset"] = report.offset;
  auto hits = nlohmann::json::array();
  for (const auto& h : report.hits) {
    hits.push_back({{"code_id", h.group_id},
                    {"detected_delay", h.detected_delay},
                    {"corrected_delay", h.corrected_delay},
                    {"score", h.score},
                    {"traced_user", h.user ? nlohmann::json(*h.user) : nlohmann::json(nullptr)}});
  }
  j["hits"] = std::move(hits);
  j["traced_users"] = report.traced_users;
  return j;
}

} // namespace delayfp
