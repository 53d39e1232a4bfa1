#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "delayfp/random.hpp"

namespace delayfp {

inline constexpr double kDefaultEpsilonOrth = 0.2;
/// Candidates drawn per code before generation is declared infeasible.
inline constexpr int kMaxCodeAttempts = 1000;

/// Group fingerprint code: n bipolar chips shared by every user of a group.
struct FingerprintCode {
  int group_id = 0;
  std::vector<double> samples;
  std::uint64_t seed = 0;
};

/// Synchronization code, embedded in every copy at the same base delay.
struct SyncCode {
  std::vector<double> samples;
  int base_delay = 0;
  std::uint64_t seed = 0;
};

struct Codebook {
  std::vector<FingerprintCode> codes;
  SyncCode sync;
  int n = 0;
  double epsilon_orth = kDefaultEpsilonOrth;
  std::uint64_t seed = 0;

  int groups() const noexcept { return static_cast<int>(codes.size()); }
};

/// max over cyclic lags d of |sum_k a[k] b[(k+d) mod n]| / (|a| |b|).
double max_cyclic_crosscorr(std::span<const double> a, std::span<const double> b);

/// Draws M group codes and the sync code. Each candidate is rejected if its
/// cross-correlation with an accepted code exceeds epsilon_orth at any lag.
Codebook generate_codebook(int groups, int n, std::uint64_t seed,
                           double epsilon_orth = kDefaultEpsilonOrth);

SyncCode generate_sync_code(std::span<const FingerprintCode> codes, int n,
                            std::uint64_t seed, double epsilon_orth,
                            Rng& rng_for_delay);

/// Throws unless every Codebook invariant holds.
void validate_codebook(const Codebook& cb);

// Versioned text format: header line, parameters, then one line of '+'/'-'
// chips per code.
void write_codebook(std::ostream& os, const Codebook& cb);
Codebook read_codebook(std::istream& is);
void save_codebook(const std::string& path, const Codebook& cb);
Codebook load_codebook(const std::string& path);

/// FNV-1a over the serialized codebook, used to tag experiment reports.
std::uint64_t codebook_hash(const Codebook& cb);

} // namespace delayfp
