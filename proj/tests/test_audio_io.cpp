#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>

#include "delayfp/audio_io.hpp"
#include "delayfp/error.hpp"

using namespace delayfp;
namespace fs = std::filesystem;

namespace {

fs::path temp_path(const std::string& name) {
  return fs::temp_directory_path() / ("delayfp_test_" + name);
}

void put16(std::ofstream& os, std::uint16_t v) {
  os.put(static_cast<char>(v & 0xff)).put(static_cast<char>(v >> 8));
}

void put32(std::ofstream& os, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

// Minimal WAV writer for formats write_wav does not produce.
void write_raw_wav(const fs::path& path, std::uint16_t format, std::uint16_t channels,
                   std::uint16_t bits, const std::vector<std::int16_t>& samples,
                   bool extra_chunk = false) {
  std::ofstream os(path, std::ios::binary);
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  const std::uint32_t extra = extra_chunk ? 8 + 6 : 0;
  os.write("RIFF", 4);
  put32(os, 36 + extra + data_bytes);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  put32(os, 16);
  put16(os, format);
  put16(os, channels);
  put32(os, 44100);
  put32(os, 44100u * channels * bits / 8);
  put16(os, static_cast<std::uint16_t>(channels * bits / 8));
  put16(os, bits);
  if (extra_chunk) {
    os.write("LIST", 4);
    put32(os, 6);
    os.write("abcdef", 6);
  }
  os.write("data", 4);
  put32(os, data_bytes);
  for (auto s : samples) put16(os, static_cast<std::uint16_t>(s));
}

Errc error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return Errc::invalid_argument;
}

} // namespace

TEST_CASE("sample mapping") {
  CHECK(dequantize_sample(16384) == 0.5);
  CHECK(dequantize_sample(-32768) == -1.0);
  CHECK(quantize_sample(0.525) == 17203); // 0.525 * 32768 = 17203.2
  CHECK(quantize_sample(1.5) == 32767);
  CHECK(quantize_sample(-2.0) == -32768);
  CHECK(quantize_sample(1.0) == 32767);
  // halves round away from zero
  CHECK(quantize_sample(0.5 / 32768.0) == 1);
  CHECK(quantize_sample(-0.5 / 32768.0) == -1);
  CHECK(quantize_sample(2.5 / 32768.0) == 3);
}

TEST_CASE("write/read round trip") {
  const auto path = temp_path("roundtrip.wav");
  Signal s;
  s.sample_rate = 22050;
  for (int v : {0, 1, -1, 16384, -32768, 32767, 12345, -999}) s.samples.push_back(v / 32768.0);
  write_wav(s, path.string());
  CHECK(fs::file_size(path) == 44 + 2 * s.size());
  const auto back = read_wav(path.string());
  CHECK(back.sample_rate == 22050);
  CHECK(back.samples == s.samples);
  fs::remove(path);
}

TEST_CASE("quantization error is bounded after clamping") {
  const auto path = temp_path("quant.wav");
  auto s = synth_signal(SynthKind::noise, 5000, 44100, 3);
  for (auto& v : s.samples) v *= 3.0; // push some values out of range
  write_wav(s, path.string());
  const auto back = read_wav(path.string());
  REQUIRE(back.size() == s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double clamped = std::clamp(s.samples[i], -1.0, 1.0 - 1.0 / 32768.0);
    CHECK(std::abs(back.samples[i] - clamped) <= 1.0 / 32768.0);
  }
  fs::remove(path);
}

TEST_CASE("reader handles extra chunks and stereo mixdown") {
  const auto path = temp_path("stereo.wav");
  write_raw_wav(path, 1, 2, 16, {16384, 0, -16384, -16384}, true);
  CHECK(error_of([&] { read_wav(path.string()); }) == Errc::unsupported_format);
  const auto mixed = read_wav(path.string(), {.mixdown = true});
  CHECK(mixed.samples == std::vector<double>{0.25, -0.5});

  write_raw_wav(path, 1, 1, 16, {100, 200}, true);
  CHECK(read_wav(path.string()).size() == 2);
  fs::remove(path);
}

TEST_CASE("reader errors are distinct") {
  CHECK(error_of([] { read_wav("/nonexistent/file.wav"); }) == Errc::file_not_found);

  const auto path = temp_path("bad.wav");
  {
    std::ofstream os(path, std::ios::binary);
    os << "this is not a wav file at all";
  }
  CHECK(error_of([&] { read_wav(path.string()); }) == Errc::malformed_header);

  write_raw_wav(path, 3, 1, 16, {0, 0});
  CHECK(error_of([&] { read_wav(path.string()); }) == Errc::unsupported_format);

  write_raw_wav(path, 1, 1, 8, {0, 0});
  CHECK(error_of([&] { read_wav(path.string()); }) == Errc::unsupported_format);
  fs::remove(path);
}

TEST_CASE("synthetic signals") {
  const auto a = synth_signal(SynthKind::noise, 4096, 44100, 1);
  const auto b = synth_signal(SynthKind::noise, 4096, 44100, 1);
  CHECK(a.samples == b.samples);
  CHECK(a.samples != synth_signal(SynthKind::noise, 4096, 44100, 2).samples);
  for (double v : a.samples) CHECK((v >= -0.5 && v <= 0.5));
  for (auto kind : {SynthKind::tone, SynthKind::chirp}) {
    const auto s = synth_signal(kind, 10000, 44100, 5);
    for (double v : s.samples) CHECK(std::abs(v) <= 0.5);
  }
  CHECK_THROWS_AS(synth_signal(SynthKind::noise, 0, 44100, 1), Error);
  CHECK(parse_synth_kind("chirp") == SynthKind::chirp);
}
