#pragma once

#include <cstdint>
#include <numeric>
#include <unordered_set>
#include <vector>

#include "mttkrp/rng.hpp"
#include "mttkrp/tensor.hpp"
#include "mttkrp/types.hpp"

namespace mttkrp {

enum class SyntheticDist { uniform, mode_skewed };

/// Recipe for a reproducible random tensor: exactly `nnz` distinct index
/// tuples with values uniform in (0,1]. `mode_skewed` restricts one mode to
/// `skew_distinct` coordinates, spreading elements evenly over them, to
/// reproduce the small-mode regime of real datasets.
struct SyntheticSpec {
  std::vector<index_t> dims;
  std::size_t nnz = 0;
  SyntheticDist dist = SyntheticDist::uniform;
  std::size_t skew_mode = 0;
  std::size_t skew_distinct = 2;
  std::uint64_t seed = 0;
};

namespace detail {

// Picks `count` distinct values from [0, space). Enumerates and partially
// shuffles when the space is small enough, otherwise draws with rejection.
inline std::vector<std::uint64_t> sample_distinct(rng::engine& g, std::uint64_t space,
                                                  std::uint64_t count) {
  std::vector<std::uint64_t> out;
  out.reserve(count);
  const std::uint64_t enumerable = std::max<std::uint64_t>(std::uint64_t{1} << 22, 4 * count);
  if (space <= enumerable) {
    std::vector<std::uint64_t> ids(space);
    std::iota(ids.begin(), ids.end(), 0);
    for (std::uint64_t i = 0; i < count; ++i) {
      std::uint64_t j = i + rng::bounded(g, space - i);
      std::swap(ids[i], ids[j]);
      out.push_back(ids[i]);
    }
  } else {
    std::unordered_set<std::uint64_t> seen;
    while (out.size() < count) {
      std::uint64_t v = rng::bounded(g, space);
      if (seen.insert(v).second) out.push_back(v);
    }
  }
  return out;
}

}  // namespace detail

template <typename T = float>
SparseTensorCOO<T> generate_synthetic(const SyntheticSpec& spec) {
  Shape shape(spec.dims);
  const std::size_t n = shape.mode_count();

  if (spec.dist == SyntheticDist::mode_skewed && spec.skew_mode >= n)
    throw error("synthetic: skew mode out of range");

  const bool skewed = spec.dist == SyntheticDist::mode_skewed;
  const std::size_t skew_mode = skewed ? spec.skew_mode : 0;
  const std::uint64_t skew_values =
      skewed ? std::min<std::uint64_t>(std::max<std::size_t>(spec.skew_distinct, 1),
                                       shape.extent(skew_mode))
             : 0;

  // Capacity of the restricted index space.
  std::uint64_t other_cap = 1;
  for (std::size_t h = 0; h < n; ++h) {
    if (skewed && h == skew_mode) continue;
    std::uint64_t e = shape.extent(h);
    if (other_cap > std::numeric_limits<std::uint64_t>::max() / e)
      other_cap = std::numeric_limits<std::uint64_t>::max();
    else
      other_cap *= e;
  }
  const std::uint64_t cap =
      skewed ? (other_cap > std::numeric_limits<std::uint64_t>::max() / skew_values
                    ? std::numeric_limits<std::uint64_t>::max()
                    : other_cap * skew_values)
             : shape.capacity();
  if (spec.nnz > cap)
    throw error("synthetic: nnz " + std::to_string(spec.nnz) + " exceeds index capacity " +
                std::to_string(cap));

  rng::engine g = rng::seeded(spec.seed);
  std::vector<index_t> coords;
  coords.reserve(spec.nnz * n);

  auto decode_into = [&](std::uint64_t id, std::size_t skip_mode, std::vector<index_t>& dst) {
    for (std::size_t h = 0; h < n; ++h) {
      if (skewed && h == skip_mode) {
        dst.push_back(0);  // placeholder, overwritten by the skew coordinate
        continue;
      }
      std::uint64_t e = shape.extent(h);
      dst.push_back(static_cast<index_t>(id % e));
      id /= e;
    }
  };

  if (!skewed) {
    if (cap <= std::max<std::uint64_t>(std::uint64_t{1} << 22, 4 * spec.nnz)) {
      for (std::uint64_t id : detail::sample_distinct(g, cap, spec.nnz))
        decode_into(id, n, coords);
    } else {
      std::unordered_set<std::vector<index_t>, detail::CoordTupleHash> seen;
      std::vector<index_t> tuple(n);
      while (seen.size() < spec.nnz) {
        for (std::size_t h = 0; h < n; ++h)
          tuple[h] = static_cast<index_t>(rng::bounded(g, shape.extent(h)));
        if (seen.insert(tuple).second)
          coords.insert(coords.end(), tuple.begin(), tuple.end());
      }
    }
  } else {
    // Choose the concentrated coordinate set, then split nnz evenly over it
    // so every chosen coordinate actually appears.
    std::vector<std::uint64_t> chosen =
        detail::sample_distinct(g, shape.extent(skew_mode), skew_values);
    std::sort(chosen.begin(), chosen.end());
    for (std::uint64_t j = 0; j < skew_values; ++j) {
      const std::uint64_t quota = spec.nnz / skew_values + (j < spec.nnz % skew_values ? 1 : 0);
      if (quota > other_cap)
        throw error("synthetic: per-coordinate quota exceeds off-mode capacity");
      std::size_t base = coords.size();
      if (other_cap <= std::max<std::uint64_t>(std::uint64_t{1} << 22, 4 * quota)) {
        for (std::uint64_t id : detail::sample_distinct(g, other_cap, quota))
          decode_into(id, skew_mode, coords);
      } else {
        std::unordered_set<std::vector<index_t>, detail::CoordTupleHash> seen;
        std::vector<index_t> tuple;
        while (seen.size() < quota) {
          tuple.clear();
          for (std::size_t h = 0; h < n; ++h)
            tuple.push_back(h == skew_mode
                                ? index_t{0}
                                : static_cast<index_t>(rng::bounded(g, shape.extent(h))));
          if (seen.insert(tuple).second)
            coords.insert(coords.end(), tuple.begin(), tuple.end());
        }
      }
      for (std::size_t i = base; i < coords.size(); i += n)
        coords[i + skew_mode] = static_cast<index_t>(chosen[j]);
    }
  }

  std::vector<T> values(spec.nnz);
  for (T& v : values) v = rng::unit_open_closed<T>(g);

  return SparseTensorCOO<T>::from_parts(std::move(shape), std::move(coords), std::move(values));
}

}  // namespace mttkrp
