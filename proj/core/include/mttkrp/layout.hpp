#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "mttkrp/tensor.hpp"
#include "mttkrp/types.hpp"

namespace mttkrp {

/// Scheme 1 splits the output-mode indices across partitions, giving each
/// partition exclusive ownership of its output rows. Scheme 2 splits the
/// nonzero elements evenly; output rows are shared and updates must be
/// atomic.
enum class Scheme { scheme1, scheme2 };

/// Vertex-to-partition assignment used by Scheme 1. `cyclic` deals the
/// degree-ordered vertices round-robin; `least_loaded` is greedy LPT, which
/// carries Graham's (4/3 - 1/(3k)) makespan guarantee.
enum class Strategy { cyclic, least_loaded };

enum class SchemePolicy { adaptive, scheme1_only, scheme2_only };

std::string_view to_string(Scheme s);
std::string_view to_string(Strategy s);
std::string_view to_string(SchemePolicy p);

/// Hypergraph degree view of one mode: degrees[i] counts the nonzeros
/// (hyperedges) incident on mode coordinate i. Zero-incidence coordinates
/// carry degree 0; the sum over all coordinates equals nnz.
struct DegreeProfile {
  std::size_t mode = 0;
  std::vector<std::uint64_t> degrees;
  std::uint64_t total = 0;

  std::size_t distinct() const {
    std::size_t c = 0;
    for (std::uint64_t d : degrees) c += d > 0;
    return c;
  }
};

/// One mode-specific tensor copy: a permutation of the element positions
/// grouped into kappa contiguous partitions.
struct ModePlan {
  std::size_t mode = 0;
  Scheme scheme = Scheme::scheme1;
  std::size_t kappa = 1;
  /// order[j] = original element position stored at copy position j.
  std::vector<std::uint64_t> order;
  /// kappa+1 monotone offsets into `order`; partition z spans
  /// [partition_offsets[z], partition_offsets[z+1]).
  std::vector<std::uint64_t> partition_offsets;
  /// Scheme 1 only: the output-mode coordinates owned by each partition,
  /// ascending, pairwise disjoint. Empty for Scheme 2.
  std::vector<std::vector<index_t>> owned_indices;

  std::size_t nnz() const { return order.size(); }
  std::uint64_t partition_size(std::size_t z) const {
    return partition_offsets[z + 1] - partition_offsets[z];
  }
};

/// Storage report for the mode-specific copies and the factor matrices.
struct MemoryEstimate {
  std::uint64_t bits_per_element = 0;    ///< sum of per-mode index bits + value bits
  std::uint64_t total_copy_bits = 0;     ///< N * nnz * bits_per_element
  std::uint64_t total_copy_bytes = 0;    ///< total_copy_bits rounded up to bytes
  std::uint64_t factor_matrix_bytes = 0; ///< sum_d I_d * R * value bits / 8
  /// Bytes the N in-memory copies actually occupy with fixed-width 32-bit
  /// coordinates and the configured value width.
  std::uint64_t storage_bytes_actual = 0;
};

struct BalanceMetrics {
  std::size_t mode = 0;
  Scheme scheme = Scheme::scheme1;
  std::size_t kappa = 1;
  std::vector<std::uint64_t> loads;               ///< per-partition nnz
  std::vector<std::uint64_t> owned_index_counts;  ///< Scheme 1 only
  double max_over_mean = 1.0;
  std::size_t empty_partitions = 0;
};

/// Scheme 1 iff the output mode has at least kappa indices to distribute.
Scheme select_scheme(std::uint64_t index_count, std::size_t kappa);

MemoryEstimate estimate_memory_for(const Shape& shape, std::size_t nnz, std::size_t rank,
                                   unsigned beta_float_bits);

BalanceMetrics balance_metrics(const ModePlan& plan, const DegreeProfile& profile);

namespace detail {

DegreeProfile degrees_from_column(std::span<const index_t> mode_coords, index_t extent,
                                  std::size_t mode);
ModePlan scheme1_from_column(std::span<const index_t> mode_coords, index_t extent,
                             std::size_t mode, std::size_t kappa, Strategy strategy);
ModePlan scheme2_from_column(std::span<const index_t> mode_coords, std::size_t mode,
                             std::size_t kappa);

}  // namespace detail

template <typename T>
DegreeProfile mode_degrees(const SparseTensorCOO<T>& t, std::size_t d) {
  if (d >= t.mode_count()) throw error("layout: mode out of range");
  auto col = t.mode_column(d);
  return detail::degrees_from_column(col, t.extent(d), d);
}

template <typename T>
ModePlan partition_scheme1(const SparseTensorCOO<T>& t, std::size_t d, std::size_t kappa,
                           Strategy strategy = Strategy::cyclic) {
  if (d >= t.mode_count()) throw error("layout: mode out of range");
  auto col = t.mode_column(d);
  return detail::scheme1_from_column(col, t.extent(d), d, kappa, strategy);
}

template <typename T>
ModePlan partition_scheme2(const SparseTensorCOO<T>& t, std::size_t d, std::size_t kappa) {
  if (d >= t.mode_count()) throw error("layout: mode out of range");
  auto col = t.mode_column(d);
  return detail::scheme2_from_column(col, d, kappa);
}

/// Builds the N mode-specific copies. Under the adaptive policy each mode
/// picks its scheme via select_scheme on the mode extent; the `_only`
/// policies force one scheme everywhere.
template <typename T>
std::vector<ModePlan> build_mode_plans(const SparseTensorCOO<T>& t, std::size_t kappa,
                                       Strategy strategy = Strategy::cyclic,
                                       SchemePolicy policy = SchemePolicy::adaptive) {
  if (kappa < 1) throw error("layout: kappa must be at least 1");
  std::vector<ModePlan> plans;
  plans.reserve(t.mode_count());
  for (std::size_t d = 0; d < t.mode_count(); ++d) {
    Scheme s;
    switch (policy) {
      case SchemePolicy::scheme1_only: s = Scheme::scheme1; break;
      case SchemePolicy::scheme2_only: s = Scheme::scheme2; break;
      default: s = select_scheme(t.extent(d), kappa); break;
    }
    plans.push_back(s == Scheme::scheme1 ? partition_scheme1(t, d, kappa, strategy)
                                         : partition_scheme2(t, d, kappa));
  }
  return plans;
}

template <typename T>
MemoryEstimate estimate_memory(const SparseTensorCOO<T>& t, std::size_t rank,
                               unsigned beta_float_bits = sizeof(T) * 8) {
  return estimate_memory_for(t.shape(), t.nnz(), rank, beta_float_bits);
}

}  // namespace mttkrp
