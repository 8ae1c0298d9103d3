#pragma once

#include <cmath>
#include <cstddef>
#include <cstring>
#include <span>
#include <type_traits>
#include <vector>

#include "mttkrp/rng.hpp"
#include "mttkrp/types.hpp"

namespace mttkrp {

/// Dense I_d x R factor matrix of one mode, row-major.
template <typename T>
struct FactorMatrix {
  static_assert(std::is_floating_point_v<T>);

  std::size_t mode = 0;
  index_t rows = 0;
  std::size_t rank = 0;
  std::vector<T> data;

  static FactorMatrix zeros(std::size_t mode, index_t rows, std::size_t rank) {
    FactorMatrix m;
    m.mode = mode;
    m.rows = rows;
    m.rank = rank;
    m.data.assign(static_cast<std::size_t>(rows) * rank, T{0});
    return m;
  }

  std::span<T> row(index_t i) { return {data.data() + static_cast<std::size_t>(i) * rank, rank}; }
  std::span<const T> row(index_t i) const {
    return {data.data() + static_cast<std::size_t>(i) * rank, rank};
  }
  T& at(index_t i, std::size_t r) { return data[static_cast<std::size_t>(i) * rank + r]; }
  T at(index_t i, std::size_t r) const { return data[static_cast<std::size_t>(i) * rank + r]; }

  bool finite() const {
    for (T v : data)
      if (!std::isfinite(static_cast<double>(v))) return false;
    return true;
  }

  bool operator==(const FactorMatrix&) const = default;
};

/// Exact bit-level equality, stricter than operator== (distinguishes -0.0
/// from +0.0).
template <typename T>
bool bitwise_equal(const FactorMatrix<T>& a, const FactorMatrix<T>& b) {
  return a.mode == b.mode && a.rows == b.rows && a.rank == b.rank &&
         a.data.size() == b.data.size() &&
         (a.data.empty() ||
          std::memcmp(a.data.data(), b.data.data(), a.data.size() * sizeof(T)) == 0);
}

template <typename T>
bool bitwise_equal(const std::vector<FactorMatrix<T>>& a, const std::vector<FactorMatrix<T>>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!bitwise_equal(a[i], b[i])) return false;
  return true;
}

/// One uniform-(0,1] factor matrix per mode, reproducible from the seed.
/// Each mode draws from its own stream, so a matrix's content depends only
/// on (seed, mode, extent, rank).
template <typename T>
std::vector<FactorMatrix<T>> random_factors(const Shape& shape, std::size_t rank,
                                            std::uint64_t seed) {
  if (rank < 1) throw error("factor: rank must be at least 1");
  std::vector<FactorMatrix<T>> out;
  out.reserve(shape.mode_count());
  for (std::size_t d = 0; d < shape.mode_count(); ++d) {
    auto m = FactorMatrix<T>::zeros(d, shape.extent(d), rank);
    rng::engine g = rng::seeded(seed, d + 1);
    for (T& v : m.data) v = rng::unit_open_closed<T>(g);
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace mttkrp
