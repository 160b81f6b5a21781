#include "le2e/weights.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>

#include "le2e/error.hpp"

static_assert(std::endian::native == std::endian::little, "weight format I/O assumes a little-endian host");

namespace le2e {

namespace {

constexpr std::array<char, 4> kMagic{'L', 'E', '2', 'E'};
constexpr std::uint32_t kMaxNameLength = 4096;
constexpr std::uint32_t kMaxRank = 8;

void check_name(const std::string& name) {
  if (name.empty()) throw DataError("weights_io", "tensor name must not be empty");
  for (unsigned char c : name) {
    if (c < 0x20 || c > 0x7e) throw DataError("weights_io", "tensor name '" + name + "' is not printable ASCII");
  }
}

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

class Reader {
 public:
  Reader(std::istream& in, std::uint64_t size) : in_(in), size_(size) {}

  void bytes(void* dst, std::uint64_t n, const char* what) {
    if (size_ - offset_ < n) {
      throw FormatError("weights_io", size_, std::string("file truncated while reading ") + what);
    }
    in_.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
    const auto got = static_cast<std::uint64_t>(in_.gcount());
    if (got != n) throw FormatError("weights_io", offset_ + got, std::string("file truncated while reading ") + what);
    offset_ += n;
  }

  template <typename T>
  T get(const char* what) {
    T v{};
    bytes(&v, sizeof(T), what);
    return v;
  }

  std::uint64_t offset() const { return offset_; }
  std::uint64_t remaining() const { return size_ - offset_; }

 private:
  std::istream& in_;
  std::uint64_t size_;
  std::uint64_t offset_ = 0;
};

}  // namespace

void WeightBundle::add(std::string name, Tensor tensor) {
  check_name(name);
  if (contains(name)) throw DataError("weights_io", "duplicate tensor name '" + name + "'");
  if (tensor.empty()) throw DataError("weights_io", "tensor '" + name + "' is empty");
  if (!tensor.all_finite()) throw DataError("weights_io", "tensor '" + name + "' contains non-finite values");
  index_.emplace(name, entries_.size());
  entries_.emplace_back(std::move(name), std::move(tensor));
}

const Tensor* WeightBundle::find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &entries_[it->second].second;
}

const Tensor& WeightBundle::get(const std::string& name) const {
  if (const Tensor* t = find(name)) return *t;
  throw ConfigError("weights_io", "missing weight tensor '" + name + "'");
}

void write_bundle(const WeightBundle& bundle, std::ostream& out) {
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kWeightFormatVersion);
  put<std::uint64_t>(out, bundle.size());
  for (const auto& [name, tensor] : bundle.entries()) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(tensor.rank()));
    for (auto d : tensor.shape()) put<std::uint64_t>(out, d);
    out.write(reinterpret_cast<const char*>(tensor.data()),
              static_cast<std::streamsize>(tensor.size() * sizeof(float)));
  }
}

void save_bundle(const WeightBundle& bundle, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("weights_io", "cannot open '" + path + "' for writing");
  write_bundle(bundle, out);
  out.flush();
  if (!out) throw IoError("weights_io", "failed writing '" + path + "'");
}

WeightBundle read_bundle(std::istream& in, std::uint64_t stream_size) {
  Reader r(in, stream_size);
  std::array<char, 4> magic{};
  r.bytes(magic.data(), magic.size(), "magic");
  if (magic != kMagic) throw FormatError("weights_io", 0, "bad magic, expected \"LE2E\"");
  const auto version = r.get<std::uint32_t>("version");
  if (version != kWeightFormatVersion) {
    throw FormatError("weights_io", 4, "unsupported format version " + std::to_string(version));
  }
  const auto count = r.get<std::uint64_t>("tensor count");

  WeightBundle bundle;
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t entry_offset = r.offset();
    const auto name_len = r.get<std::uint32_t>("name length");
    if (name_len == 0 || name_len > kMaxNameLength) {
      throw FormatError("weights_io", entry_offset, "invalid name length " + std::to_string(name_len));
    }
    std::string name(name_len, '\0');
    r.bytes(name.data(), name_len, "tensor name");
    const std::uint64_t rank_offset = r.offset();
    const auto rank = r.get<std::uint32_t>("rank");
    if (rank == 0 || rank > kMaxRank) {
      throw FormatError("weights_io", rank_offset, "tensor '" + name + "' has invalid rank " + std::to_string(rank));
    }
    Shape shape(rank);
    std::uint64_t numel = 1;
    for (auto& d : shape) {
      const std::uint64_t dim_offset = r.offset();
      const auto dim = r.get<std::uint64_t>("dimension");
      if (dim == 0 || numel > UINT64_MAX / dim) {
        throw FormatError("weights_io", dim_offset, "tensor '" + name + "' has invalid dimension " + std::to_string(dim));
      }
      d = static_cast<std::size_t>(dim);
      numel *= dim;
    }
    // Checked before allocating so a corrupt header cannot request huge buffers.
    if (numel > r.remaining() / sizeof(float)) {
      throw FormatError("weights_io", stream_size, "file truncated inside tensor '" + name + "'");
    }
    std::vector<float> data(static_cast<std::size_t>(numel));
    r.bytes(data.data(), numel * sizeof(float), "tensor data");
    for (float v : data) {
      if (!std::isfinite(v)) throw DataError("weights_io", "tensor '" + name + "' contains non-finite values");
    }
    if (bundle.contains(name)) throw FormatError("weights_io", entry_offset, "duplicate tensor name '" + name + "'");
    bundle.add(std::move(name), Tensor(std::move(shape), std::move(data)));
  }
  if (r.remaining() != 0) throw FormatError("weights_io", r.offset(), "trailing bytes after last tensor");
  return bundle;
}

WeightBundle load_bundle(const std::string& path) {
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  if (ec) throw IoError("weights_io", "cannot stat '" + path + "': " + ec.message());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("weights_io", "cannot open '" + path + "'");
  return read_bundle(in, size);
}

std::uint64_t ParamCountReport::of(const std::string& module) const {
  for (const auto& [name, n] : per_module)
    if (name == module) return n;
  return 0;
}

ParamCountReport count_parameters(const WeightBundle& bundle, const std::vector<std::string>& prefixes) {
  ParamCountReport report;
  for (const auto& p : prefixes) report.per_module.emplace_back(p, 0);
  std::uint64_t other = 0;
  for (const auto& [name, tensor] : bundle.entries()) {
    const std::string head = name.substr(0, name.find('.'));
    bool matched = false;
    for (auto& [module, n] : report.per_module) {
      if (module == head) {
        n += tensor.size();
        matched = true;
        break;
      }
    }
    if (!matched) other += tensor.size();
  }
  if (other) report.per_module.emplace_back("other", other);
  for (const auto& [_, n] : report.per_module) report.total += n;
  return report;
}

}  // namespace le2e
