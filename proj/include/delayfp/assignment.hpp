#pragma once

#include <optional>

namespace delayfp {

/// Scheme parameters. Defaults are the reference experiment configuration:
/// 64 users in 16 groups of 4, 1024-sample frames, delays 20 samples apart.
struct SchemeParams {
  int users = 64;         // N
  int groups = 16;        // M
  int per_group = 4;      // P
  int frame = 1024;       // n
  int delay_spacing = 20; // d_{j+1} - d_j
  double alpha = 0.05;

  void validate() const;
  int delay(int index) const { return index * delay_spacing; }
};

struct UserAssignment {
  int user = 0;
  int group = 0;
  int delay_index = 0;
  int delay = 0;
};

inline constexpr int kDefaultDelayTolerance = 2;

UserAssignment user_to_params(int user, const SchemeParams& params);
int params_to_user(int group, int delay_index, const SchemeParams& params);

/// Snaps a detected delay onto the delay grid. Distances are cyclic modulo
/// the frame length. Returns nullopt when no grid delay is within tol.
std::optional<int> delay_to_index(int detected_delay, const SchemeParams& params,
                                  int tol = kDefaultDelayTolerance);

} // namespace delayfp
