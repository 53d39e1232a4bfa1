#include "delayfp/assignment.hpp"

#include <cstdlib>

#include "delayfp/error.hpp"

namespace delayfp {

void SchemeParams::validate() const {
  require(groups >= 1 && per_group >= 1, "scheme: groups and per_group must be positive");
  require(users == groups * per_group, "scheme: users must equal groups * per_group");
  require(frame >= 2, "scheme: frame length must be at least 2");
  require(delay_spacing >= 1, "scheme: delay spacing must be positive");
  require((per_group - 1) * delay_spacing < frame,
          "scheme: delay grid does not fit in one frame");
  require(alpha > 0.0 && alpha < 1.0, "scheme: alpha must lie in (0, 1)");
}

UserAssignment user_to_params(int user, const SchemeParams& params) {
  require(user >= 0 && user < params.users, "user id out of range");
  UserAssignment a;
  a.user = user;
  a.group = user / params.per_group;
  a.delay_index = user % params.per_group;
  a.delay = params.delay(a.delay_index);
  return a;
}

int params_to_user(int group, int delay_index, const SchemeParams& params) {
  require(group >= 0 && group < params.groups, "group id out of range");
  require(delay_index >= 0 && delay_index < params.per_group, "delay index out of range");
  return group * params.per_group + delay_index;
}

std::optional<int> delay_to_index(int detected_delay, const SchemeParams& params, int tol) {
  const int n = params.frame;
  require(detected_delay >= 0 && detected_delay < n, "detected delay out of range");
  require(tol >= 0 && 2 * tol < params.delay_spacing, "tolerance must be below half the delay spacing");
  for (int j = 0; j < params.per_group; ++j) {
    int diff = (detected_delay - params.delay(j)) % n;
    if (diff < 0) diff += n;
    if (diff > n / 2) diff -= n;
    if (std::abs(diff) <= tol) return j;
  }
  return std::nullopt;
}

} // namespace delayfp
