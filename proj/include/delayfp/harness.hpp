#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "delayfp/assignment.hpp"
#include "delayfp/attacks.hpp"
#include "delayfp/audio_io.hpp"
#include "delayfp/codebook.hpp"
#include "delayfp/detector.hpp"
#include "delayfp/embedder.hpp"

#include <json.hpp>

namespace delayfp {

enum class Metric { exact_set, any_colluder };
enum class UserSelection { random, cycle };
enum class AttackPosition { head, random_offset };

std::string_view to_string(Metric m);
std::string_view to_string(UserSelection u);
std::string_view to_string(AttackPosition p);
Metric parse_metric(std::string_view s);
UserSelection parse_user_selection(std::string_view s);
AttackPosition parse_attack_position(std::string_view s);

/// Host audio for an experiment: a WAV file if wav_path is set, otherwise a
/// synthetic signal.
struct InputSpec {
  std::string wav_path;
  SynthKind synth = SynthKind::noise;
  std::size_t length = 64 * 1024;
  int sample_rate = 44100;
  std::uint64_t seed = 7;
};

struct ExperimentConfig {
  SchemeParams params;
  std::uint64_t codebook_seed = 42;
  double epsilon_orth = kDefaultEpsilonOrth;
  InputSpec input;
  int copies = 100;
  bool attacks = true;
  double crop_fraction = 0.5; // the rest are shifted
  int amount_min = 1;
  int amount_max = 512;
  AttackPosition position = AttackPosition::head;
  int colluders = 1; // > 1 averages that many distinct users' copies
  std::vector<Scheme> schemes{Scheme::original, Scheme::improved};
  Metric metric = Metric::exact_set;
  UserSelection selection = UserSelection::random;
  std::uint64_t master_seed = 2024;
  ThresholdPolicy policy;
  int threads = 0; // 0 = hardware concurrency

  void validate() const;
};

// Key-value configuration. Keys match the `dfp experiment run` flags, e.g.
//
//   # reference run with two colluders
//   colluders = 2
//   schemes = original,improved
//   length = 524288
//
// Blank lines and '#' comments are ignored; unknown keys are errors.

const std::vector<std::string>& config_keys();
void apply_config_value(ExperimentConfig& config, const std::string& key, const std::string& value);
ExperimentConfig parse_experiment_config(std::istream& is, ExperimentConfig base = {});
ExperimentConfig load_experiment_config(const std::string& path, ExperimentConfig base = {});

struct CopyRecord {
  int copy_id = 0;
  Scheme scheme = Scheme::original;
  std::vector<int> users;
  AttackSpec attack;
  std::vector<int> traced;
  bool sync_missing = false;
  bool correct_exact = false;
  bool correct_any = false;
  bool correct = false; // per the configured metric
};

struct SchemeRate {
  Scheme scheme = Scheme::original;
  int total = 0;
  int correct = 0;
  double rate = 0.0;         // configured metric
  double rate_exact = 0.0;
  double rate_any = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::uint64_t codebook_seed = 0;
  std::uint64_t codebook_hash = 0;
  std::vector<SchemeRate> rates;
  std::vector<CopyRecord> records; // copy-major, schemes in config order

  const SchemeRate& rate_for(Scheme s) const;
};

/// Shared, read-only state for all trials of one experiment.
struct TrialContext {
  Codebook codebook;
  Signal host;
};

TrialContext prepare_trials(const ExperimentConfig& config);

/// Users and attack for one copy. Depends only on (master seed, copy index),
/// so every scheme sees the same draw.
struct CopyPlan {
  std::vector<int> users;
  AttackSpec attack;
};

CopyPlan plan_copy(const ExperimentConfig& config, std::size_t host_length,
                   int copy_index);

CopyRecord run_trial(const ExperimentConfig& config, const TrialContext& ctx,
                     int copy_index, Scheme scheme);

ExperimentReport run_experiment(const ExperimentConfig& config);

nlohmann::json to_json(const ExperimentConfig& config);
nlohmann::json to_json(const ExperimentReport& report);

/// Per-copy rows: copy_id,scheme,users,attack_kind,attack_amount,traced_users,correct
void write_rows(std::ostream& os, const ExperimentReport& report);
void emit_report(const ExperimentReport& report, const std::string& rows_path,
                 const std::string& summary_path);

} // namespace delayfp
