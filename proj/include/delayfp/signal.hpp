#pragma once

#include <cstddef>
#include <vector>

namespace delayfp {

/// Real-valued mono audio. Nominal range is [-1, 1]; embedding may exceed it
/// transiently, clamping happens when writing 16-bit PCM.
struct Signal {
  std::vector<double> samples;
  int sample_rate = 44100;

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }
};

/// Throws if any sample is NaN or infinite.
void check_finite(const Signal& s);

} // namespace delayfp
