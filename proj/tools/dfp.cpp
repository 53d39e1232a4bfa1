// dfp: command line front end for delay-based audio fingerprinting.
//
//   dfp codebook gen --groups 16 --length 1024 --seed 42 -o codebook.txt
//   dfp synth --kind noise --length 65536 -o host.wav
//   dfp embed -i host.wav -o copy.wav --codebook codebook.txt --user 11 --scheme improved
//   dfp attack --kind shift --amount 300 -i copy.wav -o attacked.wav
//   dfp detect -i attacked.wav --codebook codebook.txt --scheme improved
//   dfp experiment run --config exp.cfg --rows rows.csv --summary summary.json

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "delayfp/error.hpp"
#include "delayfp/harness.hpp"

using namespace delayfp;

namespace {

struct SchemeFlags {
  int per_group = 4;
  int delay_spacing = 20;
  double alpha = 0.05;

  void add_to(CLI::App* app) {
    app->add_option("--per-group", per_group, "Users per group (P)")->capture_default_str();
    app->add_option("--delay-spacing", delay_spacing, "Samples between group delays")->capture_default_str();
    app->add_option("--alpha", alpha, "Embedding strength")->capture_default_str();
  }

  SchemeParams params_for(const Codebook& cb) const {
    SchemeParams p;
    p.groups = cb.groups();
    p.per_group = per_group;
    p.users = p.groups * p.per_group;
    p.frame = cb.n;
    p.delay_spacing = delay_spacing;
    p.alpha = alpha;
    p.validate();
    return p;
  }
};

struct PolicyFlags {
  ThresholdPolicy policy;

  void add_to(CLI::App* app) {
    app->add_option("--kappa", policy.kappa, "Peak threshold as a multiple of the median |correlation|")
        ->capture_default_str();
    app->add_option("--floor", policy.floor_abs, "Absolute peak threshold")->capture_default_str();
    app->add_option("--tolerance", policy.tolerance, "Delay tolerance in samples")->capture_default_str();
  }
};

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delay-based audio fingerprint embedding, attacks and tracing"};
  app.require_subcommand(1);

  // codebook gen
  auto* codebook_cmd = app.add_subcommand("codebook", "Codebook management");
  codebook_cmd->require_subcommand(1);
  auto* gen = codebook_cmd->add_subcommand("gen", "Generate group and sync codes");
  int groups = 16, length = 1024;
  std::uint64_t seed = 42;
  double epsilon = kDefaultEpsilonOrth;
  std::string out_path;
  gen->add_option("--groups", groups, "Number of group codes (M)")->capture_default_str();
  gen->add_option("--length", length, "Code length in samples (n)")->capture_default_str();
  gen->add_option("--seed", seed, "Generator seed")->capture_default_str();
  gen->add_option("--epsilon", epsilon, "Cross-correlation bound")->capture_default_str();
  gen->add_option("-o,--output", out_path, "Codebook file")->required();

  // synth
  auto* synth = app.add_subcommand("synth", "Write a synthetic host signal");
  std::string synth_kind = "noise";
  std::size_t synth_length = 65536;
  int sample_rate = 44100;
  std::uint64_t synth_seed = 7;
  synth->add_option("--kind", synth_kind, "noise, tone or chirp")->capture_default_str();
  synth->add_option("--length", synth_length, "Samples")->capture_default_str();
  synth->add_option("--rate", sample_rate, "Sample rate")->capture_default_str();
  synth->add_option("--seed", synth_seed)->capture_default_str();
  synth->add_option("-o,--output", out_path, "WAV file")->required();

  // embed
  auto* embed = app.add_subcommand("embed", "Produce a fingerprinted copy for one user");
  std::string in_path, codebook_path, scheme_name = "improved";
  int user = 0;
  SchemeFlags scheme_flags;
  embed->add_option("-i,--input", in_path, "Host WAV")->required();
  embed->add_option("-o,--output", out_path, "Fingerprinted WAV")->required();
  embed->add_option("--codebook", codebook_path)->required();
  embed->add_option("--user", user, "User id")->required();
  embed->add_option("--scheme", scheme_name, "original or improved")->capture_default_str();
  scheme_flags.add_to(embed);

  // attack
  auto* attack = app.add_subcommand("attack", "Apply a desynchronization or collusion attack");
  std::string attack_kind;
  std::vector<std::string> attack_inputs;
  std::size_t amount = 0, offset = 0;
  attack->add_option("--kind", attack_kind, "crop, shift, average, min, max or midpoint")->required();
  attack->add_option("-i,--input", attack_inputs, "Input WAV (repeat for collusion)")->required();
  attack->add_option("-o,--output", out_path, "Attacked WAV")->required();
  attack->add_option("--amount", amount, "Samples to crop or insert");
  attack->add_option("--offset", offset, "Attack position, 0 = head")->capture_default_str();

  // detect
  auto* detect_cmd = app.add_subcommand("detect", "Trace users from a suspect copy");
  std::string json_path;
  PolicyFlags policy_flags;
  detect_cmd->add_option("-i,--input", in_path, "Suspect WAV")->required();
  detect_cmd->add_option("--codebook", codebook_path)->required();
  detect_cmd->add_option("--scheme", scheme_name, "original or improved")->capture_default_str();
  detect_cmd->add_option("--json", json_path, "Also write the trace report to this file");
  scheme_flags.add_to(detect_cmd);
  policy_flags.add_to(detect_cmd);

  // experiment run
  auto* experiment = app.add_subcommand("experiment", "Detection-rate experiments");
  experiment->require_subcommand(1);
  auto* run = experiment->add_subcommand("run", "Run one experiment configuration");
  std::string config_path, rows_path, summary_path;
  run->add_option("--config", config_path, "key = value configuration file");
  run->add_option("--rows", rows_path, "Per-copy CSV output");
  run->add_option("--summary", summary_path, "Aggregate JSON output");
  std::map<std::string, std::string> overrides;
  for (const auto& key : config_keys()) {
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    run->add_option(flag, overrides[key], "Overrides config key '" + key + "'");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const auto cb = generate_codebook(groups, length, seed, epsilon);
      save_codebook(out_path, cb);
      std::cout << "wrote " << out_path << ": " << cb.groups() << " codes, n=" << cb.n
                << ", sync delay " << cb.sync.base_delay << "\n";
    } else if (synth->parsed()) {
      write_wav(synth_signal(parse_synth_kind(synth_kind), synth_length, sample_rate, synth_seed), out_path);
    } else if (embed->parsed()) {
      const auto cb = load_codebook(codebook_path);
      const auto params = scheme_flags.params_for(cb);
      const auto host = read_wav(in_path);
      write_wav(embed_stream(host, {user, parse_scheme(scheme_name), params}, cb), out_path);
    } else if (attack->parsed()) {
      std::vector<Signal> inputs;
      for (const auto& p : attack_inputs) inputs.push_back(read_wav(p));
      Signal out;
      if (attack_kind == "crop" || attack_kind == "shift") {
        require(inputs.size() == 1, "crop/shift take exactly one input");
        require(amount >= 1, "--amount is required for crop/shift");
        out = apply_attack(inputs.front(), {parse_attack_kind(attack_kind), amount, offset});
      } else if (attack_kind == "average") {
        out = collude_average(inputs);
      } else if (attack_kind == "min") {
        out = collude_minmax(inputs, MinMaxMode::min);
      } else if (attack_kind == "max") {
        out = collude_minmax(inputs, MinMaxMode::max);
      } else if (attack_kind == "midpoint") {
        out = collude_minmax(inputs, MinMaxMode::midpoint);
      } else {
        fail(Errc::invalid_argument, "unknown attack kind '" + attack_kind + "'");
      }
      write_wav(out, out_path);
    } else if (detect_cmd->parsed()) {
      const auto cb = load_codebook(codebook_path);
      const auto params = scheme_flags.params_for(cb);
      const auto report = detect(parse_scheme(scheme_name), read_wav(in_path), cb, params, policy_flags.policy);
      const auto text = to_json(report).dump(2);
      std::cout << text << "\n";
      if (!json_path.empty()) {
        std::ofstream os(json_path);
        if (!os) fail(Errc::io_failure, "cannot open " + json_path);
        os << text << "\n";
      }
    } else if (run->parsed()) {
      ExperimentConfig config;
      if (!config_path.empty()) config = load_experiment_config(config_path);
      for (const auto& key : config_keys()) {
        std::string flag = "--" + key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        if (run->count(flag) > 0) apply_config_value(config, key, overrides[key]);
      }
      const auto report = run_experiment(config);
      emit_report(report, rows_path, summary_path);
      for (const auto& r : report.rates)
        std::cout << to_string(r.scheme) << ": " << r.correct << "/" << r.total << " correct (rate "
                  << r.rate << ", exact-set " << r.rate_exact << ", any-colluder " << r.rate_any << ")\n";
    }
  } catch (const Error& e) {
    std::cerr << "dfp: " << to_string(e.code()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "dfp: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
