#include "mttkrp/layout.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace mttkrp {

std::string_view to_string(Scheme s) {
  return s == Scheme::scheme1 ? "scheme1" : "scheme2";
}

std::string_view to_string(Strategy s) {
  return s == Strategy::cyclic ? "cyclic" : "least_loaded";
}

std::string_view to_string(SchemePolicy p) {
  switch (p) {
    case SchemePolicy::scheme1_only: return "s1-only";
    case SchemePolicy::scheme2_only: return "s2-only";
    default: return "adaptive";
  }
}

Scheme select_scheme(std::uint64_t index_count, std::size_t kappa) {
  if (kappa < 1) throw error("layout: kappa must be at least 1");
  return index_count >= kappa ? Scheme::scheme1 : Scheme::scheme2;
}

MemoryEstimate estimate_memory_for(const Shape& shape, std::size_t nnz, std::size_t rank,
                                   unsigned beta_float_bits) {
  if (rank < 1) throw error("layout: rank must be at least 1");
  if (beta_float_bits != 32 && beta_float_bits != 64)
    throw error("layout: value width must be 32 or 64 bits");

  MemoryEstimate m;
  for (index_t e : shape.dims) m.bits_per_element += index_bits(e);
  m.bits_per_element += beta_float_bits;

  const std::uint64_t n = shape.mode_count();
  m.total_copy_bits = n * static_cast<std::uint64_t>(nnz) * m.bits_per_element;
  m.total_copy_bytes = (m.total_copy_bits + 7) / 8;
  for (index_t e : shape.dims)
    m.factor_matrix_bytes += static_cast<std::uint64_t>(e) * rank * (beta_float_bits / 8);
  m.storage_bytes_actual =
      n * static_cast<std::uint64_t>(nnz) * (n * sizeof(index_t) + beta_float_bits / 8);
  return m;
}

BalanceMetrics balance_metrics(const ModePlan& plan, const DegreeProfile& profile) {
  if (plan.mode != profile.mode)
    throw error("layout: plan and degree profile describe different modes");
  if (plan.nnz() != profile.total)
    throw error("layout: plan and degree profile describe different tensors");

  BalanceMetrics bm;
  bm.mode = plan.mode;
  bm.scheme = plan.scheme;
  bm.kappa = plan.kappa;
  bm.loads.reserve(plan.kappa);
  for (std::size_t z = 0; z < plan.kappa; ++z) {
    std::uint64_t load = plan.partition_size(z);
    bm.loads.push_back(load);
    bm.empty_partitions += load == 0;
  }
  for (const auto& owned : plan.owned_indices) bm.owned_index_counts.push_back(owned.size());

  const std::uint64_t max_load = bm.loads.empty() ? 0 : *std::max_element(bm.loads.begin(), bm.loads.end());
  const double mean = static_cast<double>(plan.nnz()) / static_cast<double>(plan.kappa);
  bm.max_over_mean = plan.nnz() == 0 ? 1.0 : static_cast<double>(max_load) / mean;
  return bm;
}

namespace detail {

DegreeProfile degrees_from_column(std::span<const index_t> mode_coords, index_t extent,
                                  std::size_t mode) {
  DegreeProfile p;
  p.mode = mode;
  p.degrees.assign(extent, 0);
  for (index_t c : mode_coords) ++p.degrees[c];
  p.total = mode_coords.size();
  return p;
}

namespace {

// Vertices (output-mode coordinates with degree > 0) sorted by degree
// descending, ties by ascending coordinate.
std::vector<index_t> degree_ordered_vertices(const std::vector<std::uint64_t>& degrees) {
  std::vector<index_t> vertices;
  for (std::size_t i = 0; i < degrees.size(); ++i)
    if (degrees[i] > 0) vertices.push_back(static_cast<index_t>(i));
  std::sort(vertices.begin(), vertices.end(), [&](index_t a, index_t b) {
    if (degrees[a] != degrees[b]) return degrees[a] > degrees[b];
    return a < b;
  });
  return vertices;
}

void fill_offsets_from_sizes(ModePlan& plan, const std::vector<std::uint64_t>& sizes) {
  plan.partition_offsets.assign(1, 0);
  for (std::uint64_t s : sizes) plan.partition_offsets.push_back(plan.partition_offsets.back() + s);
}

}  // namespace

ModePlan scheme1_from_column(std::span<const index_t> mode_coords, index_t extent,
                             std::size_t mode, std::size_t kappa, Strategy strategy) {
  if (kappa < 1) throw error("layout: kappa must be at least 1");

  auto profile = degrees_from_column(mode_coords, extent, mode);
  auto vertices = degree_ordered_vertices(profile.degrees);

  ModePlan plan;
  plan.mode = mode;
  plan.scheme = Scheme::scheme1;
  plan.kappa = kappa;
  plan.owned_indices.assign(kappa, {});

  constexpr std::uint32_t unassigned = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> partition_of(extent, unassigned);
  std::vector<std::uint64_t> vertex_load(kappa, 0);

  for (std::size_t k = 0; k < vertices.size(); ++k) {
    index_t v = vertices[k];
    std::size_t z;
    if (strategy == Strategy::cyclic) {
      z = k % kappa;
    } else {
      // Greedy LPT: lightest partition, ties to the lowest id.
      z = static_cast<std::size_t>(
          std::min_element(vertex_load.begin(), vertex_load.end()) - vertex_load.begin());
    }
    partition_of[v] = static_cast<std::uint32_t>(z);
    vertex_load[z] += profile.degrees[v];
    plan.owned_indices[z].push_back(v);
  }
  for (auto& owned : plan.owned_indices) std::sort(owned.begin(), owned.end());

  // Hyperedges ordered by partition id, then output-mode coordinate, then
  // original position.
  plan.order.resize(mode_coords.size());
  std::iota(plan.order.begin(), plan.order.end(), 0);
  std::sort(plan.order.begin(), plan.order.end(), [&](std::uint64_t a, std::uint64_t b) {
    index_t ca = mode_coords[a], cb = mode_coords[b];
    std::uint32_t pa = partition_of[ca], pb = partition_of[cb];
    if (pa != pb) return pa < pb;
    if (ca != cb) return ca < cb;
    return a < b;
  });

  std::vector<std::uint64_t> sizes(kappa, 0);
  for (index_t c : mode_coords) ++sizes[partition_of[c]];
  fill_offsets_from_sizes(plan, sizes);
  return plan;
}

ModePlan scheme2_from_column(std::span<const index_t> mode_coords, std::size_t mode,
                             std::size_t kappa) {
  if (kappa < 1) throw error("layout: kappa must be at least 1");

  ModePlan plan;
  plan.mode = mode;
  plan.scheme = Scheme::scheme2;
  plan.kappa = kappa;

  plan.order.resize(mode_coords.size());
  std::iota(plan.order.begin(), plan.order.end(), 0);
  std::sort(plan.order.begin(), plan.order.end(), [&](std::uint64_t a, std::uint64_t b) {
    if (mode_coords[a] != mode_coords[b]) return mode_coords[a] < mode_coords[b];
    return a < b;
  });

  // kappa near-equal chunks, the remainder spread over the first partitions.
  const std::uint64_t nnz = mode_coords.size();
  const std::uint64_t base = nnz / kappa;
  const std::uint64_t rem = nnz % kappa;
  std::vector<std::uint64_t> sizes(kappa, base);
  for (std::uint64_t z = 0; z < rem; ++z) ++sizes[z];
  fill_offsets_from_sizes(plan, sizes);
  return plan;
}

}  // namespace detail
}  // namespace mttkrp
