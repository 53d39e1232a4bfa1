#include "delayfp/attacks.hpp"

#include <algorithm>
#include <cmath>

#include "delayfp/error.hpp"

namespace delayfp {

namespace {

void check_copies(std::span<const Signal> copies) {
  require(copies.size() >= 2, "collusion needs at least two copies");
  for (const auto& c : copies)
    require(c.size() == copies.front().size(), "collusion: copies differ in length");
}

} // namespace

Signal collude_average(std::span<const Signal> copies) {
  check_copies(copies);
  Signal out = copies.front();
  for (std::size_t c = 1; c < copies.size(); ++c)
    for (std::size_t p = 0; p < out.size(); ++p) out.samples[p] += copies[c].samples[p];
  const double k = static_cast<double>(copies.size());
  for (double& v : out.samples) v /= k;
  return out;
}

Signal collude_minmax(std::span<const Signal> copies, MinMaxMode mode) {
  check_copies(copies);
  Signal out = copies.front();
  for (std::size_t p = 0; p < out.size(); ++p) {
    double lo = copies.front().samples[p];
    double hi = lo;
    for (const auto& c : copies.subspan(1)) {
      lo = std::min(lo, c.samples[p]);
      hi = std::max(hi, c.samples[p]);
    }
    switch (mode) {
    case MinMaxMode::min: out.samples[p] = lo; break;
    case MinMaxMode::max: out.samples[p] = hi; break;
    case MinMaxMode::midpoint: out.samples[p] = (lo + hi) / 2.0; break;
    }
  }
  return out;
}

Signal crop(const Signal& y, std::size_t amount, std::size_t offset) {
  require(offset <= y.size() && amount <= y.size() - offset, "crop: block out of range");
  Signal out;
  out.sample_rate = y.sample_rate;
  out.samples.reserve(y.size() - amount);
  out.samples.insert(out.samples.end(), y.samples.begin(), y.samples.begin() + offset);
  out.samples.insert(out.samples.end(), y.samples.begin() + offset + amount, y.samples.end());
  return out;
}

Signal time_shift(const Signal& y, std::size_t amount, std::size_t offset) {
  require(amount >= 1, "time_shift: amount must be at least 1");
  require(offset <= y.size(), "time_shift: offset out of range");
  Signal out = y;
  out.samples.insert(out.samples.begin() + offset, amount, 0.0);
  return out;
}

std::string_view to_string(AttackKind k) {
  switch (k) {
  case AttackKind::none: return "none";
  case AttackKind::crop: return "crop";
  case AttackKind::shift: return "shift";
  }
  return "none";
}

AttackKind parse_attack_kind(std::string_view s) {
  if (s == "none") return AttackKind::none;
  if (s == "crop") return AttackKind::crop;
  if (s == "shift") return AttackKind::shift;
  fail(Errc::invalid_argument, "unknown attack kind '" + std::string(s) + "'");
}

Signal apply_attack(const Signal& y, const AttackSpec& spec) {
  switch (spec.kind) {
  case AttackKind::none: return y;
  case AttackKind::crop: return crop(y, spec.amount, spec.offset);
  case AttackKind::shift: return time_shift(y, spec.amount, spec.offset);
  }
  return y;
}

} // namespace delayfp
