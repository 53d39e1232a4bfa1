#include "delayfp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "delayfp/error.hpp"
#include "delayfp/random.hpp"

namespace delayfp {

std::string_view to_string(Metric m) {
  return m == Metric::exact_set ? "exact-set" : "any-colluder";
}

std::string_view to_string(UserSelection u) {
  return u == UserSelection::random ? "random" : "cycle";
}

std::string_view to_string(AttackPosition p) {
  return p == AttackPosition::head ? "head" : "random-offset";
}

Metric parse_metric(std::string_view s) {
  if (s == "exact-set") return Metric::exact_set;
  if (s == "any-colluder") return Metric::any_colluder;
  fail(Errc::invalid_argument, "unknown metric '" + std::string(s) + "'");
}

UserSelection parse_user_selection(std::string_view s) {
  if (s == "random") return UserSelection::random;
  if (s == "cycle") return UserSelection::cycle;
  fail(Errc::invalid_argument, "unknown user selection '" + std::string(s) + "'");
}

AttackPosition parse_attack_position(std::string_view s) {
  if (s == "head") return AttackPosition::head;
  if (s == "random-offset") return AttackPosition::random_offset;
  fail(Errc::invalid_argument, "unknown attack position '" + std::string(s) + "'");
}

void ExperimentConfig::validate() const {
  params.validate();
  require(copies >= 1, "experiment: copies must be at least 1");
  require(crop_fraction >= 0.0 && crop_fraction <= 1.0, "experiment: crop fraction must lie in [0, 1]");
  require(amount_min >= 1 && amount_min <= amount_max, "experiment: bad attack amount range");
  require(colluders >= 1 && colluders <= params.users, "experiment: bad colluder count");
  require(!schemes.empty(), "experiment: no schemes selected");
  require(input.wav_path.empty() ? input.length >= static_cast<std::size_t>(params.frame) : true,
          "experiment: synthetic input shorter than one frame");
  require(threads >= 0, "experiment: negative thread count");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream is(value);
  T out{};
  if (!(is >> out) || !(is >> std::ws).eof())
    fail(Errc::parse_error, "config: bad value '" + value + "' for " + key);
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  fail(Errc::parse_error, "config: bad boolean '" + value + "' for " + key);
}

std::vector<Scheme> parse_schemes(const std::string& value) {
  std::vector<Scheme> out;
  std::istringstream is(value);
  std::string item;
  while (std::getline(is, item, ',')) out.push_back(parse_scheme(trim(item)));
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table{
      {"groups", [](auto& c, auto& k, auto& v) {
         c.params.groups = parse_number<int>(k, v);
         c.params.users = c.params.groups * c.params.per_group;
       }},
      {"per_group", [](auto& c, auto& k, auto& v) {
         c.params.per_group = parse_number<int>(k, v);
         c.params.users = c.params.groups * c.params.per_group;
       }},
      {"frame", [](auto& c, auto& k, auto& v) { c.params.frame = parse_number<int>(k, v); }},
      {"delay_spacing", [](auto& c, auto& k, auto& v) { c.params.delay_spacing = parse_number<int>(k, v); }},
      {"alpha", [](auto& c, auto& k, auto& v) { c.params.alpha = parse_number<double>(k, v); }},
      {"codebook_seed", [](auto& c, auto& k, auto& v) { c.codebook_seed = parse_number<std::uint64_t>(k, v); }},
      {"epsilon_orth", [](auto& c, auto& k, auto& v) { c.epsilon_orth = parse_number<double>(k, v); }},
      {"input", [](auto& c, auto&, auto& v) { c.input.wav_path = v; }},
      {"synth", [](auto& c, auto&, auto& v) { c.input.synth = parse_synth_kind(v); }},
      {"length", [](auto& c, auto& k, auto& v) { c.input.length = parse_number<std::size_t>(k, v); }},
      {"sample_rate", [](auto& c, auto& k, auto& v) { c.input.sample_rate = parse_number<int>(k, v); }},
      {"input_seed", [](auto& c, auto& k, auto& v) { c.input.seed = parse_number<std::uint64_t>(k, v); }},
      {"copies", [](auto& c, auto& k, auto& v) { c.copies = parse_number<int>(k, v); }},
      {"attacks", [](auto& c, auto& k, auto& v) { c.attacks = parse_bool(k, v); }},
      {"crop_fraction", [](auto& c, auto& k, auto& v) { c.crop_fraction = parse_number<double>(k, v); }},
      {"amount_min", [](auto& c, auto& k, auto& v) { c.amount_min = parse_number<int>(k, v); }},
      {"amount_max", [](auto& c, auto& k, auto& v) { c.amount_max = parse_number<int>(k, v); }},
      {"position", [](auto& c, auto&, auto& v) { c.position = parse_attack_position(v); }},
      {"colluders", [](auto& c, auto& k, auto& v) { c.colluders = parse_number<int>(k, v); }},
      {"schemes", [](auto& c, auto&, auto& v) { c.schemes = parse_schemes(v); }},
      {"metric", [](auto& c, auto&, auto& v) { c.metric = parse_metric(v); }},
      {"selection", [](auto& c, auto&, auto& v) { c.selection = parse_user_selection(v); }},
      {"master_seed", [](auto& c, auto& k, auto& v) { c.master_seed = parse_number<std::uint64_t>(k, v); }},
      {"kappa", [](auto& c, auto& k, auto& v) { c.policy.kappa = parse_number<double>(k, v); }},
      {"floor_abs", [](auto& c, auto& k, auto& v) { c.policy.floor_abs = parse_number<double>(k, v); }},
      {"tolerance", [](auto& c, auto& k, auto& v) { c.policy.tolerance = parse_number<int>(k, v); }},
      {"threads", [](auto& c, auto& k, auto& v) { c.threads = parse_number<int>(k, v); }},
  };
  return table;
}

} // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, _] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

void apply_config_value(ExperimentConfig& config, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) fail(Errc::parse_error, "config: unknown key '" + key + "'");
  it->second(config, key, value);
}

ExperimentConfig parse_experiment_config(std::istream& is, ExperimentConfig base) {
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(Errc::parse_error, "config line " + std::to_string(lineno) + ": expected key = value");
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    apply_config_value(base, trim(line.substr(0, eq)), value);
  }
  return base;
}

ExperimentConfig load_experiment_config(const std::string& path, ExperimentConfig base) {
  std::ifstream is(path);
  if (!is) fail(Errc::file_not_found, "cannot open config " + path);
  return parse_experiment_config(is, std::move(base));
}

const SchemeRate& ExperimentReport::rate_for(Scheme s) const {
  for (const auto& r : rates)
    if (r.scheme == s) return r;
  fail(Errc::invalid_argument, "report has no scheme '" + std::string(to_string(s)) + "'");
}

TrialContext prepare_trials(const ExperimentConfig& config) {
  config.validate();
  TrialContext ctx;
  ctx.codebook = generate_codebook(config.params.groups, config.params.frame,
                                   config.codebook_seed, config.epsilon_orth);
  if (config.input.wav_path.empty())
    ctx.host = synth_signal(config.input.synth, config.input.length, config.input.sample_rate,
                            config.input.seed);
  else
    ctx.host = read_wav(config.input.wav_path);
  require(ctx.host.size() >= static_cast<std::size_t>(config.params.frame),
          "experiment: input shorter than one frame");
  return ctx;
}

CopyPlan plan_copy(const ExperimentConfig& config, std::size_t host_length, int copy_index) {
  Rng rng(derive_seed(config.master_seed, static_cast<std::uint64_t>(copy_index)));
  const int users = config.params.users;
  const int k = config.colluders;

  CopyPlan plan;
  if (config.selection == UserSelection::cycle) {
    for (int m = 0; m < k; ++m) plan.users.push_back((copy_index * k + m) % users);
  } else {
    while (static_cast<int>(plan.users.size()) < k) {
      const int u = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(users)));
      if (std::find(plan.users.begin(), plan.users.end(), u) == plan.users.end())
        plan.users.push_back(u);
    }
  }
  std::sort(plan.users.begin(), plan.users.end());

  if (!config.attacks) return plan;
  const int cropped = static_cast<int>(std::lround(config.copies * config.crop_fraction));
  plan.attack.kind = copy_index < cropped ? AttackKind::crop : AttackKind::shift;
  plan.attack.amount = static_cast<std::size_t>(config.amount_min) +
                       uniform_below(rng, static_cast<std::uint64_t>(config.amount_max - config.amount_min + 1));
  if (config.position == AttackPosition::random_offset) {
    const std::size_t room = plan.attack.kind == AttackKind::crop
                                 ? host_length - std::min(host_length, plan.attack.amount)
                                 : host_length;
    plan.attack.offset = uniform_below(rng, room + 1);
  }
  return plan;
}

CopyRecord run_trial(const ExperimentConfig& config, const TrialContext& ctx, int copy_index,
                     Scheme scheme) {
  const CopyPlan plan = plan_copy(config, ctx.host.size(), copy_index);

  std::vector<Signal> copies;
  copies.reserve(plan.users.size());
  for (int user : plan.users)
    copies.push_back(embed_stream(ctx.host, {user, scheme, config.params}, ctx.codebook));
  Signal pirate = copies.size() > 1 ? collude_average(copies) : std::move(copies.front());
  pirate = apply_attack(pirate, plan.attack);

  const TraceReport trace = detect(scheme, pirate, ctx.codebook, config.params, config.policy);

  CopyRecord rec;
  rec.copy_id = copy_index;
  rec.scheme = scheme;
  rec.users = plan.users;
  rec.attack = plan.attack;
  rec.traced = trace.traced_users;
  rec.sync_missing = trace.sync_missing;
  rec.correct_exact = rec.traced == rec.users;
  rec.correct_any = std::any_of(rec.traced.begin(), rec.traced.end(), [&](int t) {
    return std::binary_search(rec.users.begin(), rec.users.end(), t);
  });
  rec.correct = config.metric == Metric::exact_set ? rec.correct_exact : rec.correct_any;
  return rec;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  const TrialContext ctx = prepare_trials(config);

  ExperimentReport report;
  report.config = config;
  report.codebook_seed = config.codebook_seed;
  report.codebook_hash = codebook_hash(ctx.codebook);

  const std::size_t schemes = config.schemes.size();
  const std::size_t jobs = static_cast<std::size_t>(config.copies) * schemes;
  report.records.resize(jobs);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t job = next++; job < jobs; job = next++) {
      try {
        report.records[job] = run_trial(config, ctx, static_cast<int>(job / schemes),
                                        config.schemes[job % schemes]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = jobs;
      }
    }
  };

  unsigned threads = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(jobs));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  for (Scheme s : config.schemes) {
    SchemeRate r;
    r.scheme = s;
    int exact = 0, any = 0;
    for (const auto& rec : report.records) {
      if (rec.scheme != s) continue;
      ++r.total;
      r.correct += rec.correct ? 1 : 0;
      exact += rec.correct_exact ? 1 : 0;
      any += rec.correct_any ? 1 : 0;
    }
    r.rate = static_cast<double>(r.correct) / r.total;
    r.rate_exact = static_cast<double>(exact) / r.total;
    r.rate_any = static_cast<double>(any) / r.total;
    report.rates.push_back(r);
  }
  return report;
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["params"] = {{"users", c.params.users},
                 {"groups", c.params.groups},
                 {"per_group", c.params.per_group},
                 {"frame", c.params.frame},
                 {"delay_spacing", c.params.delay_spacing},
                 {"alpha", c.params.alpha}};
  j["codebook_seed"] = c.codebook_seed;
  j["epsilon_orth"] = c.epsilon_orth;
  if (c.input.wav_path.empty())
    j["input"] = {{"synth", std::string(to_string(c.input.synth))},
                  {"length", c.input.length},
                  {"sample_rate", c.input.sample_rate},
                  {"seed", c.input.seed}};
  else
    j["input"] = {{"wav", c.input.wav_path}};
  j["copies"] = c.copies;
  j["attacks"] = c.attacks;
  j["crop_fraction"] = c.crop_fraction;
  j["amount_range"] = {c.amount_min, c.amount_max};
  j["position"] = std::string(to_string(c.position));
  j["colluders"] = c.colluders;
  auto schemes = nlohmann::json::array();
  for (Scheme s : c.schemes) schemes.push_back(std::string(to_string(s)));
  j["schemes"] = std::move(schemes);
  j["metric"] = std::string(to_string(c.metric));
  j["user_selection"] = std::string(to_string(c.selection));
  j["master_seed"] = c.master_seed;
  j["policy"] = {{"kappa", c.policy.kappa},
                 {"floor_abs", c.policy.floor_abs},
                 {"tolerance", c.policy.tolerance}};
  return j;
}

nlohmann::json to_json(const ExperimentReport& report) {
  std::ostringstream hash;
  hash << std::hex << std::setw(16) << std::setfill('0') << report.codebook_hash;

  nlohmann::json j;
  j["config"] = to_json(report.config);
  j["codebook"] = {{"seed", report.codebook_seed}, {"hash", hash.str()}};
  auto rates = nlohmann::json::array();
  for (const auto& r : report.rates)
    rates.push_back({{"scheme", std::string(to_string(r.scheme))},
                     {"total", r.total},
                     {"correct", r.correct},
                     {"rate", r.rate},
                     {"rate_exact_set", r.rate_exact},
                     {"rate_any_colluder", r.rate_any}});
  j["rates"] = std::move(rates);
  return j;
}

namespace {

std::string join_ids(const std::vector<int>& ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(ids[i]);
  }
  return s;
}

} // namespace

void write_rows(std::ostream& os, const ExperimentReport& report) {
  os << "copy_id,scheme,users,attack_kind,attack_amount,traced_users,correct\n";
  for (const auto& r : report.records)
    os << r.copy_id << ',' << to_string(r.scheme) << ',' << join_ids(r.users) << ','
       << to_string(r.attack.kind) << ',' << r.attack.amount << ',' << join_ids(r.traced) << ','
       << (r.correct ? 1 : 0) << '\n';
}

void emit_report(const ExperimentReport& report, const std::string& rows_path,
                 const std::string& summary_path) {
  if (!rows_path.empty()) {
    std::ofstream os(rows_path);
    if (!os) fail(Errc::io_failure, "cannot open " + rows_path + " for writing");
    write_rows(os, report);
    if (!os) fail(Errc::io_failure, "write failed: " + rows_path);
  }
  if (!summary_path.empty()) {
    std::ofstream os(summary_path);
    if (!os) fail(Errc::io_failure, "cannot open " + summary_path + " for writing");
    os << to_json(report).dump(2) << '\n';
    if (!os) fail(Errc::io_failure, "write failed: " + summary_path);
  }
}

} // namespace delayfp
