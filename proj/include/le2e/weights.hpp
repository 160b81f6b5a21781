#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "le2e/tensor.hpp"

namespace le2e {

inline constexpr std::uint32_t kWeightFormatVersion = 1;

// Named tensors in insertion order. Names are unique, non-empty printable
// ASCII; every tensor is finite.
class WeightBundle {
 public:
  using Entry = std::pair<std::string, Tensor>;

  void add(std::string name, Tensor tensor);
  bool contains(const std::string& name) const { return index_.count(name) != 0; }
  const Tensor& get(const std::string& name) const;
  const Tensor* find(const std::string& name) const;

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  std::uint32_t version() const noexcept { return version_; }

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
  std::uint32_t version_ = kWeightFormatVersion;
};

// Binary v1, little-endian:
//   "LE2E" | u32 version | u64 count | count x (u32 name_len, name, u32 ndim, u64 dims[ndim], f32 data)
void write_bundle(const WeightBundle& bundle, std::ostream& out);
void save_bundle(const WeightBundle& bundle, const std::string& path);
WeightBundle read_bundle(std::istream& in, std::uint64_t stream_size);
WeightBundle load_bundle(const std::string& path);

struct ParamCountReport {
  std::vector<std::pair<std::string, std::uint64_t>> per_module;
  std::uint64_t total = 0;

  std::uint64_t of(const std::string& module) const;
};

inline const std::vector<std::string> kGeneratorPrefixes{"encoder", "variance", "decoder", "vocoder"};
inline const std::vector<std::string> kAllPrefixes{"encoder", "variance", "decoder", "vocoder", "mpd", "mrd"};

// Groups by the text before the first '.'; names outside `prefixes` are
// counted under "other" (reported only if non-zero).
ParamCountReport count_parameters(const WeightBundle& bundle,
                                  const std::vector<std::string>& prefixes = kAllPrefixes);

}  // namespace le2e
