#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "delayfp/error.hpp"
#include "delayfp/harness.hpp"

using namespace delayfp;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.copies = 12;
  c.threads = 2;
  return c;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

} // namespace

TEST_CASE("config validation") {
  ExperimentConfig c;
  CHECK_NOTHROW(c.validate());
  c.copies = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.crop_fraction = 1.5;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.amount_min = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.schemes.clear();
  CHECK_THROWS_AS(c.validate(), Error);
  CHECK_THROWS_AS(run_experiment([] { ExperimentConfig x; x.copies = 0; return x; }()), Error);
}

TEST_CASE("copy plans") {
  auto c = small_config();
  c.copies = 100;
  c.colluders = 3;
  int cropped = 0;
  for (int i = 0; i < c.copies; ++i) {
    const auto plan = plan_copy(c, 65536, i);
    CHECK(plan.users.size() == 3);
    CHECK(std::set<int>(plan.users.begin(), plan.users.end()).size() == 3);
    CHECK(std::is_sorted(plan.users.begin(), plan.users.end()));
    CHECK(plan.attack.amount >= 1);
    CHECK(plan.attack.amount <= 512);
    CHECK(plan.attack.offset == 0);
    cropped += plan.attack.kind == AttackKind::crop ? 1 : 0;
    const auto again = plan_copy(c, 65536, i);
    CHECK(again.users == plan.users);
    CHECK(again.attack.amount == plan.attack.amount);
  }
  CHECK(cropped == 50);

  c.selection = UserSelection::cycle;
  c.colluders = 1;
  CHECK(plan_copy(c, 65536, 70).users == std::vector<int>{6});

  c.attacks = false;
  CHECK(plan_copy(c, 65536, 3).attack.kind == AttackKind::none);
}

TEST_CASE("unattacked trials are correct for every user") {
  auto c = small_config();
  c.attacks = false;
  const auto ctx = prepare_trials(c);
  for (int user = 0; user < c.params.users; user += 7) {
    c.selection = UserSelection::cycle;
    for (Scheme s : {Scheme::original, Scheme::improved}) {
      const auto rec = run_trial(c, ctx, user, s);
      CHECK(rec.users == std::vector<int>{user});
      CHECK(rec.correct);
    }
  }
}

TEST_CASE("experiment report invariants") {
  auto c = small_config();
  const auto report = run_experiment(c);
  REQUIRE(report.records.size() == 24);
  REQUIRE(report.rates.size() == 2);
  for (const auto& r : report.rates) {
    CHECK(r.total == 12);
    CHECK(r.rate >= 0.0);
    CHECK(r.rate <= 1.0);
    CHECK(r.rate_exact <= r.rate_any);
    int correct = 0;
    for (const auto& rec : report.records)
      if (rec.scheme == r.scheme && rec.correct) ++correct;
    CHECK(r.rate == static_cast<double>(correct) / 12);
  }
  CHECK(report.rate_for(Scheme::improved).rate == 1.0);
  CHECK(report.rate_for(Scheme::original).rate <= 0.25);

  // records are ordered by copy then scheme regardless of threading
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    CHECK(report.records[i].copy_id == static_cast<int>(i / 2));
    CHECK(report.records[i].scheme == c.schemes[i % 2]);
  }
}

TEST_CASE("rows round trip to the aggregate rates") {
  auto c = small_config();
  c.copies = 10;
  const auto report = run_experiment(c);
  std::ostringstream os;
  write_rows(os, report);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "copy_id,scheme,users,attack_kind,attack_amount,traced_users,correct");

  int rows = 0, orig_total = 0, orig_ok = 0, imp_total = 0, imp_ok = 0;
  while (std::getline(is, line)) {
    const auto cols = split(line, ',');
    REQUIRE(cols.size() == 7);
    ++rows;
    const bool ok = cols[6] == "1";
    if (cols[1] == "original") {
      ++orig_total;
      orig_ok += ok;
    } else {
      ++imp_total;
      imp_ok += ok;
    }
  }
  CHECK(rows == 20);
  CHECK(static_cast<double>(orig_ok) / orig_total == report.rate_for(Scheme::original).rate);
  CHECK(static_cast<double>(imp_ok) / imp_total == report.rate_for(Scheme::improved).rate);
}

TEST_CASE("empty report emits only the header") {
  ExperimentReport empty;
  std::ostringstream os;
  write_rows(os, empty);
  CHECK(os.str() == "copy_id,scheme,users,attack_kind,attack_amount,traced_users,correct\n");
}

TEST_CASE("experiments are deterministic and thread-count independent") {
  auto c = small_config();
  c.copies = 6;
  c.threads = 1;
  const auto a = run_experiment(c);
  c.threads = 4;
  const auto b = run_experiment(c);
  std::ostringstream ra, rb;
  write_rows(ra, a);
  write_rows(rb, b);
  CHECK(ra.str() == rb.str());
  CHECK(to_json(a).dump() == to_json(b).dump());
}

TEST_CASE("mid-stream attacks are supported") {
  auto c = small_config();
  c.copies = 4;
  c.position = AttackPosition::random_offset;
  const auto report = run_experiment(c);
  bool any_offset = false;
  for (const auto& r : report.records) any_offset |= r.attack.offset > 0;
  CHECK(any_offset);
}

TEST_CASE("key-value config files") {
  std::istringstream is(R"(# two colluders, improved only
colluders = 2
schemes = improved
per_group = 2
groups = 8
alpha = 0.04
attacks = false
input = "/tmp/host.wav"
)");
  const auto c = parse_experiment_config(is);
  CHECK(c.colluders == 2);
  CHECK(c.schemes == std::vector<Scheme>{Scheme::improved});
  CHECK(c.params.users == 16);
  CHECK(c.params.alpha == 0.04);
  CHECK_FALSE(c.attacks);
  CHECK(c.input.wav_path == "/tmp/host.wav");
  CHECK(c.copies == 100);

  std::istringstream unknown("colour = blue\n");
  CHECK_THROWS_AS(parse_experiment_config(unknown), Error);
  std::istringstream bad("copies = many\n");
  CHECK_THROWS_AS(parse_experiment_config(bad), Error);
  std::istringstream no_eq("copies 3\n");
  CHECK_THROWS_AS(parse_experiment_config(no_eq), Error);
  CHECK(std::find(config_keys().begin(), config_keys().end(), "master_seed") != config_keys().end());
}
