#include "delayfp/codebook.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "delayfp/error.hpp"

namespace delayfp {

const char* to_string(Errc code) {
  switch (code) {
  case Errc::invalid_argument: return "invalid argument";
  case Errc::codebook_infeasible: return "codebook infeasible";
  case Errc::sync_infeasible: return "sync infeasible";
  case Errc::file_not_found: return "file not found";
  case Errc::malformed_header: return "malformed header";
  case Errc::unsupported_format: return "unsupported format";
  case Errc::io_failure: return "i/o failure";
  case Errc::parse_error: return "parse error";
  }
  return "unknown";
}

namespace {

constexpr const char* kMagic = "delayfp-codebook";
constexpr int kFormatVersion = 1;

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<double> draw_bipolar(Rng& rng, int n) {
  std::vector<double> chips(static_cast<std::size_t>(n));
  for (auto& c : chips) c = bipolar(rng);
  return chips;
}

bool within_bound(std::span<const double> candidate,
                  std::span<const FingerprintCode> accepted, double eps) {
  for (const auto& code : accepted)
    if (max_cyclic_crosscorr(candidate, code.samples) > eps) return false;
  return true;
}

void check_generation_args(int n, double eps) {
  require(n >= 2, "code length must be at least 2");
  // eps == 1 is accepted: it disables the orthogonality constraint.
  require(eps > 0.0 && eps <= 1.0, "epsilon_orth must lie in (0, 1]");
}

std::string chips_to_text(std::span<const double> chips) {
  std::string s(chips.size(), '+');
  for (std::size_t i = 0; i < chips.size(); ++i)
    if (chips[i] < 0) s[i] = '-';
  return s;
}

std::vector<double> chips_from_text(const std::string& s, int n) {
  if (static_cast<int>(s.size()) != n)
    fail(Errc::parse_error, "codebook: chip line has wrong length");
  std::vector<double> chips(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '+') chips[i] = 1.0;
    else if (s[i] == '-') chips[i] = -1.0;
    else fail(Errc::parse_error, "codebook: chips must be '+' or '-'");
  }
  return chips;
}

} // namespace

double max_cyclic_crosscorr(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "max_cyclic_crosscorr: length mismatch");
  require(!a.empty(), "max_cyclic_crosscorr: empty input");
  const double denom = norm(a) * norm(b);
  require(denom > 0.0, "max_cyclic_crosscorr: zero-norm input");

  const std::size_t n = a.size();
  double best = 0.0;
  for (std::size_t d = 0; d < n; ++d) {
    double acc = 0.0;
    // b[(k + d) mod n] split into the two contiguous runs
    for (std::size_t k = 0; k < n - d; ++k) acc += a[k] * b[k + d];
    for (std::size_t k = n - d; k < n; ++k) acc += a[k] * b[k + d - n];
    best = std::max(best, std::abs(acc));
  }
  return std::min(1.0, best / denom);
}

SyncCode generate_sync_code(std::span<const FingerprintCode> codes, int n,
                            std::uint64_t seed, double epsilon_orth,
                            Rng& rng_for_delay) {
  check_generation_args(n, epsilon_orth);
  for (const auto& c : codes)
    require(static_cast<int>(c.samples.size()) == n,
            "generate_sync_code: code length differs from n");

  Rng rng(seed);
  for (int attempt = 0; attempt < kMaxCodeAttempts; ++attempt) {
    auto candidate = draw_bipolar(rng, n);
    if (!within_bound(candidate, codes, epsilon_orth)) continue;
    SyncCode sync;
    sync.samples = std::move(candidate);
    sync.seed = seed;
    sync.base_delay = static_cast<int>(uniform_below(rng_for_delay, static_cast<std::uint64_t>(n)));
    return sync;
  }
  fail(Errc::sync_infeasible,
       "sync infeasible: no candidate met epsilon_orth within " +
           std::to_string(kMaxCodeAttempts) + " attempts");
}

Codebook generate_codebook(int groups, int n, std::uint64_t seed, double epsilon_orth) {
  require(groups >= 1, "generate_codebook: need at least one group");
  check_generation_args(n, epsilon_orth);

  Codebook cb;
  cb.n = n;
  cb.epsilon_orth = epsilon_orth;
  cb.seed = seed;
  cb.codes.reserve(static_cast<std::size_t>(groups));

  for (int i = 0; i < groups; ++i) {
    const std::uint64_t code_seed = derive_seed(seed, static_cast<std::uint64_t>(i));
    Rng rng(code_seed);
    bool accepted = false;
    for (int attempt = 0; attempt < kMaxCodeAttempts && !accepted; ++attempt) {
      auto candidate = draw_bipolar(rng, n);
      if (!within_bound(candidate, cb.codes, epsilon_orth)) continue;
      cb.codes.push_back({i, std::move(candidate), code_seed});
      accepted = true;
    }
    if (!accepted)
      fail(Errc::codebook_infeasible,
           "codebook infeasible: group " + std::to_string(i) + " exhausted " +
               std::to_string(kMaxCodeAttempts) + " attempts");
  }

  Rng delay_rng(derive_seed(seed, 0x5359'4e43ULL));
  cb.sync = generate_sync_code(cb.codes, n, seed + 1, epsilon_orth, delay_rng);
  return cb;
}

void validate_codebook(const Codebook& cb) {
  require(cb.n >= 2, "codebook: n must be at least 2");
  require(!cb.codes.empty(), "codebook: no group codes");
  require(cb.epsilon_orth > 0.0 && cb.epsilon_orth <= 1.0, "codebook: bad epsilon_orth");
  auto check_chips = [&](std::span<const double> s) {
    require(static_cast<int>(s.size()) == cb.n, "codebook: code length differs from n");
    for (double v : s) require(v == 1.0 || v == -1.0, "codebook: chips must be bipolar");
  };
  for (std::size_t i = 0; i < cb.codes.size(); ++i) {
    require(cb.codes[i].group_id == static_cast<int>(i), "codebook: group ids must be 0..M-1");
    check_chips(cb.codes[i].samples);
  }
  check_chips(cb.sync.samples);
  require(cb.sync.base_delay >= 0 && cb.sync.base_delay < cb.n,
          "codebook: sync base delay out of range");
}

void write_codebook(std::ostream& os, const Codebook& cb) {
  os << kMagic << ' ' << kFormatVersion << '\n';
  os << "n " << cb.n << '\n';
  os << "groups " << cb.codes.size() << '\n';
  os << "epsilon_orth " << std::setprecision(17) << cb.epsilon_orth << '\n';
  os << "seed " << cb.seed << '\n';
  os << "sync " << cb.sync.seed << ' ' << cb.sync.base_delay << ' '
     << chips_to_text(cb.sync.samples) << '\n';
  for (const auto& c : cb.codes)
    os << "code " << c.group_id << ' ' << c.seed << ' ' << chips_to_text(c.samples) << '\n';
}

Codebook read_codebook(std::istream& is) {
  auto expect_key = [&](const char* key) {
    std::string k;
    if (!(is >> k) || k != key)
      fail(Errc::parse_error, std::string("codebook: expected '") + key + "'");
  };

  std::string magic;
  int version = 0;
  if (!(is >> magic >> version) || magic != kMagic)
    fail(Errc::parse_error, "codebook: bad magic");
  if (version != kFormatVersion)
    fail(Errc::unsupported_format, "codebook: unsupported version " + std::to_string(version));

  Codebook cb;
  int groups = 0;
  expect_key("n");
  is >> cb.n;
  expect_key("groups");
  is >> groups;
  expect_key("epsilon_orth");
  is >> cb.epsilon_orth;
  expect_key("seed");
  is >> cb.seed;
  if (!is || cb.n < 2 || groups < 1) fail(Errc::parse_error, "codebook: bad parameters");

  std::string chips;
  expect_key("sync");
  is >> cb.sync.seed >> cb.sync.base_delay >> chips;
  if (!is) fail(Errc::parse_error, "codebook: bad sync line");
  cb.sync.samples = chips_from_text(chips, cb.n);

  for (int i = 0; i < groups; ++i) {
    FingerprintCode code;
    expect_key("code");
    is >> code.group_id >> code.seed >> chips;
    if (!is) fail(Errc::parse_error, "codebook: truncated code list");
    code.samples = chips_from_text(chips, cb.n);
    cb.codes.push_back(std::move(code));
  }
  validate_codebook(cb);
  return cb;
}

void save_codebook(const std::string& path, const Codebook& cb) {
  std::ofstream os(path);
  if (!os) fail(Errc::io_failure, "cannot open " + path + " for writing");
  write_codebook(os, cb);
  if (!os) fail(Errc::io_failure, "write failed: " + path);
}

Codebook load_codebook(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(Errc::file_not_found, "cannot open codebook " + path);
  return read_codebook(is);
}

std::uint64_t codebook_hash(const Codebook& cb) {
  std::ostringstream os;
  write_codebook(os, cb);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : os.str()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

} // namespace delayfp
