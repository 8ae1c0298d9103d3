#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mttkrp/factor.hpp"
#include "mttkrp/tensor.hpp"
#include "mttkrp/types.hpp"

// Reference implementations kept deliberately independent of the layout and
// kernel modules: no plans, no reordering, no shared compute helpers.
// Agreement with the parallel executor is the evidence the tests rely on.

namespace mttkrp {

/// Sequential MTTKRP straight from the definition: a single loop over the
/// elements in stored order, accumulating val * prod of input-factor rows
/// into a zero matrix.
template <typename T>
FactorMatrix<T> oracle_mttkrp(const SparseTensorCOO<T>& t,
                              const std::vector<FactorMatrix<T>>& factors, std::size_t d) {
  if (d >= t.mode_count()) throw error("oracle: mode out of range");
  if (factors.size() != t.mode_count()) throw error("oracle: expected one factor per mode");
  const std::size_t rank = factors[0].rank;
  for (std::size_t w = 0; w < factors.size(); ++w) {
    if (factors[w].rows != t.extent(w) || factors[w].rank != rank)
      throw error("oracle: factor shape mismatch");
  }

  auto out = FactorMatrix<T>::zeros(d, t.extent(d), rank);
  for (std::size_t i = 0; i < t.nnz(); ++i) {
    const auto c = t.coords(i);
    for (std::size_t r = 0; r < rank; ++r) {
      T term = t.value(i);
      for (std::size_t w = 0; w < t.mode_count(); ++w) {
        if (w != d) term *= factors[w].at(c[w], r);
      }
      out.at(c[d], r) += term;
    }
  }
  return out;
}

/// Validates the oracle itself on tiny tensors: materializes the dense
/// mode-d unfolding, forms the Khatri-Rao product of the input factors
/// explicitly column by column, and multiplies the two matrices. Guarded to
/// small index spaces since the dense unfolding has capacity many entries.
template <typename T>
FactorMatrix<T> dense_unfolding_mttkrp(const SparseTensorCOO<T>& t,
                                       const std::vector<FactorMatrix<T>>& factors,
                                       std::size_t d, std::uint64_t capacity_limit = 4096) {
  if (d >= t.mode_count()) throw error("oracle: mode out of range");
  const std::uint64_t cap = t.shape().capacity();
  if (cap > capacity_limit) throw error("oracle: tensor too large for the dense cross-check");
  const std::size_t rank = factors.at(d).rank;

  // Dense unfolding: rows are mode-d coordinates, columns enumerate the
  // remaining coordinates with the lowest mode varying fastest.
  const std::uint64_t n_cols = cap / t.extent(d);
  std::vector<T> unfolding(t.extent(d) * n_cols, T{0});
  for (std::size_t i = 0; i < t.nnz(); ++i) {
    const auto c = t.coords(i);
    std::uint64_t col = 0, stride = 1;
    for (std::size_t h = 0; h < t.mode_count(); ++h) {
      if (h == d) continue;
      col += c[h] * stride;
      stride *= t.extent(h);
    }
    unfolding[c[d] * n_cols + col] += t.value(i);
  }

  // Khatri-Rao product of the input factors, one column at a time, as an
  // iterated Kronecker product. Folding ascending modes from the right
  // keeps the lowest mode varying fastest, matching the unfolding columns.
  std::vector<T> kr(n_cols * rank);
  for (std::size_t r = 0; r < rank; ++r) {
    std::vector<T> column{T{1}};
    for (std::size_t h = 0; h < t.mode_count(); ++h) {
      if (h == d) continue;
      std::vector<T> next(column.size() * t.extent(h));
      for (index_t i = 0; i < t.extent(h); ++i)
        for (std::size_t j = 0; j < column.size(); ++j)
          next[static_cast<std::size_t>(i) * column.size() + j] = factors[h].at(i, r) * column[j];
      column = std::move(next);
    }
    for (std::uint64_t j = 0; j < n_cols; ++j) kr[j * rank + r] = column[j];
  }

  auto out = FactorMatrix<T>::zeros(d, t.extent(d), rank);
  for (index_t i = 0; i < t.extent(d); ++i)
    for (std::uint64_t j = 0; j < n_cols; ++j) {
      const T x = unfolding[i * n_cols + j];
      if (x == T{0}) continue;
      for (std::size_t r = 0; r < rank; ++r) out.at(i, r) += x * kr[j * rank + r];
    }
  return out;
}

struct OptimalPartitionResult {
  std::uint64_t opt_max_load = 0;
  std::vector<std::uint32_t> witness;  ///< partition id per vertex
};

/// Exhaustive optimal makespan partitioning for the load-bound tests.
/// Enumerates every assignment of vertices to partitions (with pruning), so
/// the instance budget is small: at most 14 vertices and 4 partitions.
OptimalPartitionResult brute_force_optimal_partition(std::span<const std::uint64_t> degrees,
                                                     std::size_t kappa);

}  // namespace mttkrp
