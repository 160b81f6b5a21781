#include "le2e/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "le2e/error.hpp"

namespace le2e {

namespace {

constexpr const char* kModule = "wav";

void put_u32(std::vector<std::uint8_t>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u16(std::vector<std::uint8_t>& b, std::uint16_t v) {
  b.push_back(static_cast<std::uint8_t>(v));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_tag(std::vector<std::uint8_t>& b, const char* tag) { b.insert(b.end(), tag, tag + 4); }

std::uint32_t get_u32(const std::vector<std::uint8_t>& b, std::size_t at) {
  if (at + 4 > b.size()) throw FormatError(kModule, b.size(), "truncated WAV");
  return static_cast<std::uint32_t>(b[at]) | static_cast<std::uint32_t>(b[at + 1]) << 8 |
         static_cast<std::uint32_t>(b[at + 2]) << 16 | static_cast<std::uint32_t>(b[at + 3]) << 24;
}

std::uint16_t get_u16(const std::vector<std::uint8_t>& b, std::size_t at) {
  if (at + 2 > b.size()) throw FormatError(kModule, b.size(), "truncated WAV");
  return static_cast<std::uint16_t>(b[at] | b[at + 1] << 8);
}

bool tag_is(const std::vector<std::uint8_t>& b, std::size_t at, const char* tag) {
  return at + 4 <= b.size() && std::memcmp(b.data() + at, tag, 4) == 0;
}

}  // namespace

std::int16_t quantize_pcm16(float x) {
  const double c = std::clamp(static_cast<double>(x), -1.0, 1.0);
  return static_cast<std::int16_t>(std::lround(c * 32767.0));
}

std::vector<std::uint8_t> encode_wav(const Tensor& samples, std::uint32_t sample_rate) {
  const auto n = static_cast<std::uint32_t>(samples.size());
  const std::uint32_t data_bytes = n * 2;
  std::vector<std::uint8_t> b;
  b.reserve(44 + data_bytes);
  put_tag(b, "RIFF");
  put_u32(b, 36 + data_bytes);
  put_tag(b, "WAVE");
  put_tag(b, "fmt ");
  put_u32(b, 16);
  put_u16(b, 1);  // PCM
  put_u16(b, 1);  // mono
  put_u32(b, sample_rate);
  put_u32(b, sample_rate * 2);
  put_u16(b, 2);
  put_u16(b, 16);
  put_tag(b, "data");
  put_u32(b, data_bytes);
  for (float v : samples.values()) put_u16(b, static_cast<std::uint16_t>(quantize_pcm16(v)));
  return b;
}

void write_wav(const std::string& path, const Tensor& samples, std::uint32_t sample_rate) {
  const auto bytes = encode_wav(samples, sample_rate);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(kModule, "cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError(kModule, "failed writing '" + path + "'");
}

WavAudio decode_wav(const std::vector<std::uint8_t>& b) {
  if (!tag_is(b, 0, "RIFF") || !tag_is(b, 8, "WAVE")) throw FormatError(kModule, 0, "not a RIFF/WAVE file");
  std::size_t at = 12;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  while (at + 8 <= b.size()) {
    const std::uint32_t size = get_u32(b, at + 4);
    const std::size_t body = at + 8;
    if (tag_is(b, at, "fmt ")) {
      format = get_u16(b, body);
      channels = get_u16(b, body + 2);
      rate = get_u32(b, body + 4);
      bits = get_u16(b, body + 14);
      if (format == 0xFFFE && size >= 26) format = get_u16(b, body + 24);  // extensible: sub-format GUID
      have_fmt = true;
    } else if (tag_is(b, at, "data")) {
      if (!have_fmt) throw FormatError(kModule, at, "data chunk before fmt chunk");
      if (channels != 1) throw InputError(kModule, "only mono WAV is supported, got " + std::to_string(channels) + " channels");
      if (body + size > b.size()) throw FormatError(kModule, b.size(), "truncated WAV data chunk");
      WavAudio out;
      out.sample_rate = rate;
      if (format == 1 && bits == 16) {
        const std::size_t n = size / 2;
        if (n == 0) throw InputError(kModule, "WAV has no samples");
        out.samples = Tensor({n});
        for (std::size_t i = 0; i < n; ++i) {
          out.samples[i] = static_cast<float>(static_cast<std::int16_t>(get_u16(b, body + 2 * i))) / 32767.0f;
        }
      } else if (format == 3 && bits == 32) {
        const std::size_t n = size / 4;
        if (n == 0) throw InputError(kModule, "WAV has no samples");
        out.samples = Tensor({n});
        std::memcpy(out.samples.data(), b.data() + body, n * 4);
      } else {
        throw FormatError(kModule, 20, "unsupported WAV encoding (format " + std::to_string(format) + ", " +
                                           std::to_string(bits) + " bits)");
      }
      return out;
    }
    at = body + size + (size & 1u);
  }
  throw FormatError(kModule, b.size(), "no data chunk");
}

WavAudio read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(kModule, "cannot open '" + path + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_wav(bytes);
}

}  // namespace le2e
