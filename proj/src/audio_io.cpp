#include "delayfp/audio_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <vector>

#include "delayfp/error.hpp"
#include "delayfp/random.hpp"

namespace delayfp {

void check_finite(const Signal& s) {
  for (double v : s.samples)
    require(std::isfinite(v), "signal contains a non-finite sample");
}

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

void put32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
}

void put_tag(std::vector<unsigned char>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

struct FmtChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
};

} // namespace

Signal read_wav(const std::string& path, const WavReadOptions& options) {
  if (!std::filesystem::exists(path)) fail(Errc::file_not_found, "no such file: " + path);
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io_failure, "cannot open " + path);
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());

  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    fail(Errc::malformed_header, path + ": not a RIFF/WAVE file");

  std::optional<FmtChunk> fmt;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::size_t size = le32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t avail = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || size > avail) fail(Errc::malformed_header, path + ": bad fmt chunk");
      const unsigned char* f = bytes.data() + body;
      FmtChunk c;
      c.format = le16(f);
      c.channels = le16(f + 2);
      c.sample_rate = le32(f + 4);
      c.bits = le16(f + 14);
      if (c.format == kFormatExtensible) {
        if (size < 40) fail(Errc::malformed_header, path + ": truncated extensible fmt chunk");
        c.format = le16(f + 24); // sub-format GUID starts with the format tag
      }
      fmt = c;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = std::min(size, avail); // tolerate streamed files with a bogus size
      break;
    }
    pos = body + size + (size & 1);
  }

  if (!fmt) fail(Errc::malformed_header, path + ": missing fmt chunk");
  if (!data) fail(Errc::malformed_header, path + ": missing data chunk");
  if (fmt->format != kFormatPcm)
    fail(Errc::unsupported_format, path + ": only PCM encoding is supported");
  if (fmt->bits != 16)
    fail(Errc::unsupported_format, path + ": only 16-bit samples are supported, got " +
                                       std::to_string(fmt->bits));
  if (fmt->channels == 0) fail(Errc::malformed_header, path + ": zero channels");
  if (fmt->channels > 1 && !options.mixdown)
    fail(Errc::unsupported_format, path + ": only mono is supported (" +
                                       std::to_string(fmt->channels) + " channels)");

  const std::size_t channels = fmt->channels;
  const std::size_t frames = data_size / (2 * channels);
  Signal s;
  s.sample_rate = static_cast<int>(fmt->sample_rate);
  s.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    double sum = 0.0;
    for (std::size_t c = 0; c < channels; ++c)
      sum += dequantize_sample(static_cast<std::int16_t>(le16(data + 2 * (i * channels + c))));
    s.samples[i] = sum / static_cast<double>(channels);
  }
  return s;
}

std::int16_t quantize_sample(double v) {
  if (std::isnan(v)) return 0;
  const double clamped = std::clamp(v, -1.0, 1.0 - 1.0 / 32768.0);
  // std::lround rounds halves away from zero
  return static_cast<std::int16_t>(std::lround(clamped * 32768.0));
}

void write_wav(const Signal& signal, const std::string& path) {
  const auto data_bytes = static_cast<std::uint32_t>(signal.size() * 2);
  std::vector<unsigned char> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put32(out, 16);
  put16(out, kFormatPcm);
  put16(out, 1);
  put32(out, static_cast<std::uint32_t>(signal.sample_rate));
  put32(out, static_cast<std::uint32_t>(signal.sample_rate) * 2);
  put16(out, 2);
  put16(out, 16);
  put_tag(out, "data");
  put32(out, data_bytes);
  for (double v : signal.samples) put16(out, static_cast<std::uint16_t>(quantize_sample(v)));

  std::ofstream os(path, std::ios::binary);
  if (!os) fail(Errc::io_failure, "cannot open " + path + " for writing");
  os.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!os) fail(Errc::io_failure, "write failed: " + path);
}

std::string_view to_string(SynthKind k) {
  switch (k) {
  case SynthKind::noise: return "noise";
  case SynthKind::tone: return "tone";
  case SynthKind::chirp: return "chirp";
  }
  return "noise";
}

SynthKind parse_synth_kind(std::string_view s) {
  if (s == "noise") return SynthKind::noise;
  if (s == "tone") return SynthKind::tone;
  if (s == "chirp") return SynthKind::chirp;
  fail(Errc::invalid_argument, "unknown synth kind '" + std::string(s) + "'");
}

Signal synth_signal(SynthKind kind, std::size_t length, int sample_rate, std::uint64_t seed) {
  require(length >= 1, "synth: length must be at least 1");
  require(sample_rate > 0, "synth: sample rate must be positive");
  Signal s;
  s.sample_rate = sample_rate;
  s.samples.resize(length);
  const double rate = sample_rate;
  constexpr double two_pi = 2.0 * std::numbers::pi;

  switch (kind) {
  case SynthKind::noise: {
    Rng rng(seed);
    for (double& v : s.samples) v = uniform_unit(rng) - 0.5;
    break;
  }
  case SynthKind::tone: {
    // seed picks the pitch so different seeds give different hosts
    const double freq = 220.0 + static_cast<double>(seed % 16) * 55.0;
    for (std::size_t i = 0; i < length; ++i)
      s.samples[i] = 0.5 * std::sin(two_pi * freq * static_cast<double>(i) / rate);
    break;
  }
  case SynthKind::chirp: {
    const double f0 = 100.0, f1 = std::min(8000.0, rate / 2.0);
    const double span_s = static_cast<double>(length) / rate;
    for (std::size_t i = 0; i < length; ++i) {
      const double t = static_cast<double>(i) / rate;
      s.samples[i] = 0.5 * std::sin(two_pi * (f0 * t + (f1 - f0) * t * t / (2.0 * span_s)));
    }
    break;
  }
  }
  return s;
}

} // namespace delayfp
