#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include "mttkrp/types.hpp"

namespace mttkrp {

namespace detail {

struct CoordTupleHash {
  std::size_t operator()(const std::vector<index_t>& c) const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (index_t x : c) {
      h ^= x;
      h *= 0x100000001b3ull;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace detail

/// Sparse tensor in coordinate format: a shape plus a flat sequence of
/// <indices, value> nonzero elements. Coordinates are stored structure-of-
/// arrays style as one contiguous array of nnz * N zero-based indices.
/// Immutable once built; safe for concurrent reads.
template <typename T>
class SparseTensorCOO {
  static_assert(std::is_floating_point_v<T>, "value type must be float or double");

 public:
  using value_type = T;

  explicit SparseTensorCOO(Shape shape) : shape_(std::move(shape)) {}

  /// Adopts pre-built flat storage. Validates every element against the
  /// shape so anything constructed through here satisfies the invariants.
  static SparseTensorCOO from_parts(Shape shape, std::vector<index_t> coords,
                                    std::vector<T> values) {
    SparseTensorCOO t(std::move(shape));
    const std::size_t n = t.mode_count();
    if (values.empty() ? !coords.empty() : coords.size() != values.size() * n)
      throw error("tensor: coordinate/value storage size mismatch");
    t.coords_ = std::move(coords);
    t.values_ = std::move(values);
    for (std::size_t i = 0; i < t.nnz(); ++i) t.check_element(t.coords(i), t.values_[i]);
    return t;
  }

  const Shape& shape() const { return shape_; }
  std::size_t mode_count() const { return shape_.mode_count(); }
  index_t extent(std::size_t d) const { return shape_.extent(d); }
  std::size_t nnz() const { return values_.size(); }

  void reserve(std::size_t n) {
    coords_.reserve(n * mode_count());
    values_.reserve(n);
  }

  void add(std::span<const index_t> coords, T value) {
    check_element(coords, value);
    coords_.insert(coords_.end(), coords.begin(), coords.end());
    values_.push_back(value);
  }

  void add(std::initializer_list<index_t> coords, T value) {
    add(std::span<const index_t>(coords.begin(), coords.size()), value);
  }

  std::span<const index_t> coords(std::size_t i) const {
    return {coords_.data() + i * mode_count(), mode_count()};
  }
  index_t index(std::size_t i, std::size_t mode) const {
    return coords_[i * mode_count() + mode];
  }
  T value(std::size_t i) const { return values_[i]; }
  std::span<const T> values() const { return values_; }

  /// Gathers the mode-d coordinate of every element into a contiguous array.
  std::vector<index_t> mode_column(std::size_t d) const {
    if (d >= mode_count()) throw error("tensor: mode out of range");
    std::vector<index_t> col(nnz());
    for (std::size_t i = 0; i < col.size(); ++i) col[i] = index(i, d);
    return col;
  }

  bool operator==(const SparseTensorCOO&) const = default;

 private:
  void check_element(std::span<const index_t> coords, T value) const {
    if (coords.size() != mode_count())
      throw error("tensor: element has wrong number of coordinates");
    for (std::size_t h = 0; h < coords.size(); ++h)
      if (coords[h] >= shape_.dims[h])
        throw error("tensor: coordinate " + std::to_string(coords[h]) +
                    " out of range for mode " + std::to_string(h));
    if (!std::isfinite(static_cast<double>(value)))
      throw error("tensor: non-finite element value");
  }

  Shape shape_;
  std::vector<index_t> coords_;
  std::vector<T> values_;
};

/// Order-insensitive comparison of two tensors as sets of <indices, value>
/// pairs. Values compare exactly (no tolerance).
template <typename T>
bool same_element_set(const SparseTensorCOO<T>& a, const SparseTensorCOO<T>& b) {
  if (a.shape() != b.shape() || a.nnz() != b.nnz()) return false;
  auto canon = [](const SparseTensorCOO<T>& t) {
    std::vector<std::pair<std::vector<index_t>, T>> v;
    v.reserve(t.nnz());
    for (std::size_t i = 0; i < t.nnz(); ++i) {
      auto c = t.coords(i);
      v.emplace_back(std::vector<index_t>(c.begin(), c.end()), t.value(i));
    }
    std::sort(v.begin(), v.end());
    return v;
  };
  return canon(a) == canon(b);
}

}  // namespace mttkrp
