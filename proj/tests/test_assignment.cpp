#include <doctest.h>

#include "delayfp/assignment.hpp"
#include "delayfp/error.hpp"

using namespace delayfp;

TEST_CASE("user_to_params") {
  const SchemeParams p;
  auto a = user_to_params(0, p);
  CHECK(a.group == 0);
  CHECK(a.delay_index == 0);
  CHECK(a.delay == 0);

  a = user_to_params(5, p);
  CHECK(a.group == 1);
  CHECK(a.delay_index == 1);
  CHECK(a.delay == 20);

  a = user_to_params(63, p);
  CHECK(a.group == 15);
  CHECK(a.delay_index == 3);
  CHECK(a.delay == 60);

  CHECK_THROWS_AS(user_to_params(-1, p), Error);
  CHECK_THROWS_AS(user_to_params(64, p), Error);
}

TEST_CASE("params_to_user") {
  const SchemeParams p;
  CHECK(params_to_user(2, 3, p) == 11);
  CHECK(params_to_user(0, 0, p) == 0);
  CHECK_THROWS_AS(params_to_user(16, 0, p), Error);
  CHECK_THROWS_AS(params_to_user(0, 4, p), Error);
  CHECK_THROWS_AS(params_to_user(-1, 0, p), Error);
}

TEST_CASE("assignment is a bijection") {
  const SchemeParams p;
  for (int t = 0; t < p.users; ++t) {
    const auto a = user_to_params(t, p);
    CHECK(params_to_user(a.group, a.delay_index, p) == t);
  }
}

TEST_CASE("delay_to_index") {
  const SchemeParams p;
  CHECK(delay_to_index(40, p, 2) == 2);
  CHECK(delay_to_index(41, p, 2) == 2);
  CHECK(delay_to_index(38, p, 2) == 2);
  CHECK_FALSE(delay_to_index(37, p, 2).has_value());
  CHECK_FALSE(delay_to_index(300, p, 2).has_value());
  // cyclic distance: 1023 is one sample before delay 0
  CHECK(delay_to_index(1023, p, 2) == 0);
  for (int j = 0; j < p.per_group; ++j) CHECK(delay_to_index(p.delay(j), p, 0) == j);

  CHECK_THROWS_AS(delay_to_index(1024, p, 2), Error);
  CHECK_THROWS_AS(delay_to_index(0, p, 10), Error);
}

TEST_CASE("delay grid is injective modulo the frame") {
  const SchemeParams p;
  for (int i = 0; i < p.per_group; ++i)
    for (int k = i + 1; k < p.per_group; ++k) CHECK(p.delay(i) % p.frame != p.delay(k) % p.frame);
}

TEST_CASE("SchemeParams validation") {
  SchemeParams p;
  CHECK_NOTHROW(p.validate());
  p.users = 63;
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  p.delay_spacing = 400; // 3 * 400 >= 1024
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  p.alpha = 1.0;
  CHECK_THROWS_AS(p.validate(), Error);
}
