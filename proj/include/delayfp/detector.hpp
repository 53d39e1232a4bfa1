#pragma once

#include <optional>
#include <span>
#include <vector>

#include "delayfp/assignment.hpp"
#include "delayfp/codebook.hpp"
#include "delayfp/embedder.hpp"
#include "delayfp/signal.hpp"

#include <json.hpp>

namespace delayfp {

inline constexpr int kSyncCodeId = -1;

/// Normalized cyclic correlation of one code against a folded accumulator,
/// one value per lag. The peak lag equals the code's embedding delay.
struct CorrelationProfile {
  int code_id = 0;
  std::vector<double> values;
};

/// A lag is a peak when its score is at least
/// max(kappa * median(|values|), floor_abs); accepted peaks suppress
/// neighbours within +-tolerance lags.
struct ThresholdPolicy {
  double kappa = 9.0;
  double floor_abs = 0.1;
  int tolerance = kDefaultDelayTolerance;

  double threshold(std::span<const double> values) const;
};

struct Peak {
  int lag = 0;
  double score = 0.0;
};

struct DetectionHit {
  int group_id = 0;
  int detected_delay = 0;
  int corrected_delay = 0;
  double score = 0.0;
  std::optional<int> user; // empty when the delay is off the grid
};

struct TraceReport {
  Scheme scheme = Scheme::original;
  std::optional<int> sync_detected_delay;
  bool sync_missing = false;
  int offset = 0; // (d^S' - d^S) mod n, 0 for the original scheme
  std::vector<DetectionHit> hits;
  std::vector<int> traced_users; // sorted, unique
};

/// A[m] = sum over complete frames f of y[f*n + m].
std::vector<double> fold_frames(std::span<const double> y, int n);

CorrelationProfile correlate_all_lags(std::span<const double> accumulator,
                                      std::span<const double> code,
                                      int code_id = 0);

std::vector<Peak> find_peaks(const CorrelationProfile& profile,
                             const ThresholdPolicy& policy);

TraceReport detect_original(const Signal& y, const Codebook& codebook,
                            const SchemeParams& params,
                            const ThresholdPolicy& policy = {});

/// Locates the sync code first and removes its displacement from every
/// fingerprint delay before mapping delays to users.
TraceReport detect_improved(const Signal& y, const Codebook& codebook,
                            const SchemeParams& params,
                            const ThresholdPolicy& policy = {});

TraceReport detect(Scheme scheme, const Signal& y, const Codebook& codebook,
                   const SchemeParams& params, const ThresholdPolicy& policy = {});

nlohmann::json to_json(const TraceReport& report);

} // namespace delayfp
