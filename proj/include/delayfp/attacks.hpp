#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "delayfp/signal.hpp"

namespace delayfp {

enum class MinMaxMode { min, max, midpoint };

Signal collude_average(std::span<const Signal> copies);
Signal collude_minmax(std::span<const Signal> copies, MinMaxMode mode);

/// Removes samples [offset, offset + amount).
Signal crop(const Signal& y, std::size_t amount, std::size_t offset = 0);

/// Inserts `amount` zero samples at offset.
Signal time_shift(const Signal& y, std::size_t amount, std::size_t offset = 0);

enum class AttackKind { none, crop, shift };

std::string_view to_string(AttackKind k);
AttackKind parse_attack_kind(std::string_view s);

struct AttackSpec {
  AttackKind kind = AttackKind::none;
  std::size_t amount = 0;
  std::size_t offset = 0; // 0 is a head attack
};

Signal apply_attack(const Signal& y, const AttackSpec& spec);

} // namespace delayfp
