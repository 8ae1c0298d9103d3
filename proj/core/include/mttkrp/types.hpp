#pragma once

#include <bit>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace mttkrp {

/// Zero-based coordinate of a nonzero element in one mode. Fixed-width
/// storage keeps element access O(1); extents above 2^32-1 are rejected.
using index_t = std::uint32_t;

inline constexpr std::uint64_t max_extent = std::numeric_limits<index_t>::max();

class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Per-mode extents of a tensor. N = dims.size() modes, every extent >= 1.
struct Shape {
  std::vector<index_t> dims;

  Shape() = default;
  explicit Shape(std::vector<index_t> d) : dims(std::move(d)) { validate(); }

  std::size_t mode_count() const { return dims.size(); }
  index_t extent(std::size_t d) const { return dims[d]; }

  void validate() const {
    if (dims.empty()) throw error("shape: a tensor needs at least one mode");
    for (index_t e : dims)
      if (e == 0) throw error("shape: zero extent");
  }

  /// Number of representable index tuples, saturating at uint64 max.
  std::uint64_t capacity() const {
    std::uint64_t cap = 1;
    for (index_t e : dims) {
      if (e != 0 && cap > std::numeric_limits<std::uint64_t>::max() / e)
        return std::numeric_limits<std::uint64_t>::max();
      cap *= e;
    }
    return cap;
  }

  bool operator==(const Shape&) const = default;
};

/// Bits needed to address one coordinate of a mode with the given extent:
/// ceil(log2(extent)) with a 1-bit floor for extent-1 modes.
inline std::uint64_t index_bits(index_t extent) {
  if (extent <= 2) return 1;
  return std::bit_width(static_cast<std::uint64_t>(extent) - 1);
}

}  // namespace mttkrp
