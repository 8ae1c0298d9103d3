#include "mttkrp/oracle.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace mttkrp {

namespace {

struct Search {
  std::span<const std::uint64_t> degrees;
  std::size_t kappa = 1;
  std::vector<std::uint64_t> loads;
  std::vector<std::uint32_t> assignment;
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint32_t> best_assignment;

  void run(std::size_t v, std::size_t used, std::uint64_t current_max) {
    if (current_max >= best) return;
    if (v == degrees.size()) {
      best = current_max;
      best_assignment = assignment;
      return;
    }
    // Identical empty partitions are interchangeable; trying one of them is
    // enough.
    const std::size_t limit = std::min(kappa, used + 1);
    for (std::size_t z = 0; z < limit; ++z) {
      loads[z] += degrees[v];
      assignment[v] = static_cast<std::uint32_t>(z);
      run(v + 1, std::max(used, z + 1), std::max(current_max, loads[z]));
      loads[z] -= degrees[v];
    }
  }
};

}  // namespace

OptimalPartitionResult brute_force_optimal_partition(std::span<const std::uint64_t> degrees,
                                                     std::size_t kappa) {
  if (kappa < 1) throw error("oracle: kappa must be at least 1");
  if (degrees.size() > 14 || kappa > 4)
    throw error("oracle: instance over the exhaustive-search budget (14 vertices, 4 partitions)");

  if (degrees.empty()) return {0, {}};

  // Descending degrees prune far better; map the witness back afterwards.
  std::vector<std::size_t> by_degree(degrees.size());
  std::iota(by_degree.begin(), by_degree.end(), 0);
  std::sort(by_degree.begin(), by_degree.end(),
            [&](std::size_t a, std::size_t b) { return degrees[a] > degrees[b]; });
  std::vector<std::uint64_t> sorted;
  sorted.reserve(degrees.size());
  for (std::size_t i : by_degree) sorted.push_back(degrees[i]);

  Search s;
  s.degrees = sorted;
  s.kappa = kappa;
  s.loads.assign(kappa, 0);
  s.assignment.assign(degrees.size(), 0);
  s.run(0, 0, 0);

  OptimalPartitionResult result;
  result.opt_max_load = s.best;
  result.witness.resize(degrees.size());
  for (std::size_t i = 0; i < degrees.size(); ++i)
    result.witness[by_degree[i]] = s.best_assignment[i];
  return result;
}

}  // namespace mttkrp
