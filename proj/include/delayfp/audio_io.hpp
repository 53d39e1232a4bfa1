#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "delayfp/signal.hpp"

namespace delayfp {

struct WavReadOptions {
  bool mixdown = false; // average channels instead of rejecting multichannel
};

/// Reads a 16-bit PCM RIFF/WAVE file; sample v maps to v / 32768.
Signal read_wav(const std::string& path, const WavReadOptions& options = {});

/// Writes mono 16-bit PCM with a canonical 44-byte header. Out-of-range
/// values are clamped, never rejected.
void write_wav(const Signal& signal, const std::string& path);

std::int16_t quantize_sample(double v);
inline double dequantize_sample(std::int16_t v) { return v / 32768.0; }

enum class SynthKind { noise, tone, chirp };

std::string_view to_string(SynthKind k);
SynthKind parse_synth_kind(std::string_view s);

/// Deterministic test audio with peak amplitude <= 0.5. Noise is uniform in
/// [-0.5, 0.5].
Signal synth_signal(SynthKind kind, std::size_t length, int sample_rate,
                    std::uint64_t seed);

} // namespace delayfp
