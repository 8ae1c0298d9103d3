#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mttkrp/factor.hpp"
#include "mttkrp/layout.hpp"
#include "mttkrp/parallel.hpp"
#include "mttkrp/tensor.hpp"

namespace mttkrp {

/// Execution parameters of the worker-pool model. One logical worker per
/// partition stands in for one streaming multiprocessor; `batch_p` is the
/// number of elements a worker consumes per batch (the thread-block column
/// count). Rank-level parallelism is the vectorizable inner loop over r.
struct ExecConfig {
  std::size_t kappa = 1;
  std::size_t batch_p = 32;
  /// Run partitions sequentially in id order for bit-reproducible results
  /// regardless of scheme.
  bool deterministic = false;

  void validate() const {
    if (kappa < 1) throw error("kernel: kappa must be at least 1");
    if (batch_p < 1) throw error("kernel: batch size P must be at least 1");
  }
};

namespace detail {

template <typename T>
void atomic_add(T& slot, T v) {
  std::atomic_ref<T> ref(slot);
  ref.fetch_add(v, std::memory_order_relaxed);
}

template <typename T>
void validate_factors(const SparseTensorCOO<T>& t,
                      std::span<const FactorMatrix<T>* const> factors) {
  if (factors.size() != t.mode_count())
    throw error("kernel: expected one factor matrix per mode");
  const std::size_t rank = factors.empty() ? 0 : factors[0]->rank;
  if (rank < 1) throw error("kernel: rank must be at least 1");
  for (std::size_t w = 0; w < factors.size(); ++w) {
    if (factors[w]->mode != w)
      throw error("kernel: factor matrix " + std::to_string(w) + " labeled mode " +
                  std::to_string(factors[w]->mode));
    if (factors[w]->rows != t.extent(w))
      throw error("kernel: factor matrix " + std::to_string(w) + " has " +
                  std::to_string(factors[w]->rows) + " rows, tensor extent is " +
                  std::to_string(t.extent(w)));
    if (factors[w]->rank != rank) throw error("kernel: factor matrices disagree on rank");
  }
}

template <typename T>
void validate_plan(const SparseTensorCOO<T>& t, const ModePlan& plan, const ExecConfig& config) {
  if (plan.mode >= t.mode_count()) throw error("kernel: plan mode out of range");
  if (plan.nnz() != t.nnz()) throw error("kernel: plan does not cover this tensor");
  if (plan.partition_offsets.size() != plan.kappa + 1 || plan.partition_offsets.front() != 0 ||
      plan.partition_offsets.back() != t.nnz())
    throw error("kernel: malformed partition offsets");
  if (plan.kappa != config.kappa)
    throw error("kernel: plan built for kappa " + std::to_string(plan.kappa) +
                ", config requests " + std::to_string(config.kappa));
}

template <typename T>
FactorMatrix<T> mttkrp_mode_impl(const SparseTensorCOO<T>& t, const ModePlan& plan,
                                 std::span<const FactorMatrix<T>* const> factors,
                                 const ExecConfig& config) {
  config.validate();
  validate_factors(t, factors);
  validate_plan(t, plan, config);

  const std::size_t d = plan.mode;
  const std::size_t n = t.mode_count();
  const std::size_t rank = factors[0]->rank;
  const bool local_update = plan.scheme == Scheme::scheme1;

  auto out = FactorMatrix<T>::zeros(d, t.extent(d), rank);
  T* out_data = out.data.data();

  for_each_partition(plan.kappa, config.deterministic, [&](std::size_t z) {
    std::vector<T> acc(rank);
    const std::uint64_t begin = plan.partition_offsets[z];
    const std::uint64_t end = plan.partition_offsets[z + 1];
    for (std::uint64_t batch = begin; batch < end; batch += config.batch_p) {
      const std::uint64_t batch_end = std::min<std::uint64_t>(batch + config.batch_p, end);
      for (std::uint64_t j = batch; j < batch_end; ++j) {
        const std::uint64_t e = plan.order[j];
        const auto coords = t.coords(e);
        const T val = t.value(e);

        for (std::size_t r = 0; r < rank; ++r) acc[r] = val;
        for (std::size_t w = 0; w < n; ++w) {
          if (w == d) continue;
          const T* vec = factors[w]->row(coords[w]).data();
          for (std::size_t r = 0; r < rank; ++r) acc[r] *= vec[r];
        }

        for (std::size_t r = 0; r < rank; ++r) {
          if (!std::isfinite(static_cast<double>(acc[r])))
            throw error("kernel: non-finite partial product at tensor element " +
                        std::to_string(e) + " (mode " + std::to_string(d) + ", copy position " +
                        std::to_string(j) + ")");
        }

        T* out_row = out_data + static_cast<std::size_t>(coords[d]) * rank;
        if (local_update) {
          for (std::size_t r = 0; r < rank; ++r) out_row[r] += acc[r];
        } else {
          for (std::size_t r = 0; r < rank; ++r) atomic_add(out_row[r], acc[r]);
        }
      }
    }
  });

  return out;
}

}  // namespace detail

/// Partial product of one nonzero: acc[r] = value * prod_{w != d} Y_w(c_w, r).
/// Input factors are never written.
template <typename T>
void element_update(std::span<const index_t> coords, T value,
                    const std::vector<FactorMatrix<T>>& factors, std::size_t output_mode,
                    std::span<T> acc) {
  const std::size_t rank = acc.size();
  for (const auto& f : factors)
    if (f.rank != rank) throw error("kernel: factor matrices disagree on rank");
  for (std::size_t r = 0; r < rank; ++r) acc[r] = value;
  for (std::size_t w = 0; w < factors.size(); ++w) {
    if (w == output_mode) continue;
    auto vec = factors[w].row(coords[w]);
    for (std::size_t r = 0; r < rank; ++r) acc[r] *= vec[r];
  }
}

template <typename T>
std::vector<T> element_update(const SparseTensorCOO<T>& t, std::size_t element,
                              const std::vector<FactorMatrix<T>>& factors,
                              std::size_t output_mode) {
  std::vector<T> acc(factors.empty() ? 0 : factors[0].rank);
  element_update<T>(t.coords(element), t.value(element), factors, output_mode, acc);
  return acc;
}

/// Computes the output factor matrix of `plan.mode` from a zero-initialized
/// accumulator. Scheme 1 partitions own their output rows and write them
/// directly; Scheme 2 partitions share rows and accumulate atomically. Input
/// factors, tensor, and plan are read-only.
template <typename T>
FactorMatrix<T> mttkrp_mode(const SparseTensorCOO<T>& t, const ModePlan& plan,
                            const std::vector<FactorMatrix<T>>& factors,
                            const ExecConfig& config) {
  std::vector<const FactorMatrix<T>*> ptrs;
  ptrs.reserve(factors.size());
  for (const auto& f : factors) ptrs.push_back(&f);
  return detail::mttkrp_mode_impl<T>(t, plan, ptrs, config);
}

/// Runs all modes in order with a full barrier between modes (the join of
/// each mode's workers). With `chain_outputs` the freshly computed matrix
/// replaces the input factor of its mode for the remaining modes, mirroring
/// the factor-update flow of a decomposition iteration; without it every
/// mode consumes the original factors, which is how kernels are benchmarked
/// mode by mode.
template <typename T>
std::vector<FactorMatrix<T>> mttkrp_all_modes(const SparseTensorCOO<T>& t,
                                              const std::vector<ModePlan>& plans,
                                              const std::vector<FactorMatrix<T>>& factors,
                                              const ExecConfig& config, bool chain_outputs) {
  if (plans.size() != t.mode_count()) throw error("kernel: expected one plan per mode");
  for (std::size_t d = 0; d < plans.size(); ++d)
    if (plans[d].mode != d) throw error("kernel: plans out of mode order");

  std::vector<const FactorMatrix<T>*> current;
  current.reserve(factors.size());
  for (const auto& f : factors) current.push_back(&f);

  std::vector<FactorMatrix<T>> outputs;
  outputs.reserve(plans.size());
  for (std::size_t d = 0; d < plans.size(); ++d) {
    outputs.push_back(detail::mttkrp_mode_impl<T>(t, plans[d], current, config));
    if (chain_outputs) current[d] = &outputs.back();
  }
  return outputs;
}

struct ModeTiming {
  std::size_t mode = 0;
  Scheme scheme = Scheme::scheme1;
  std::vector<double> wall_ms;  ///< one sample per iteration
  double min_ms = 0;
  double median_ms = 0;
  std::size_t busy_workers = 0;  ///< partitions that received at least one element
  std::vector<std::uint64_t> elements_per_worker;
};

struct TimingReport {
  std::size_t iters = 0;
  std::vector<ModeTiming> modes;
  std::vector<double> total_ms;  ///< per-iteration sum over modes
  double total_min_ms = 0;
  double total_median_ms = 0;
  /// Whether every iteration produced bit-identical outputs (trivially true
  /// for a single iteration).
  bool outputs_bit_identical = true;
};

template <typename T>
struct TimedRun {
  TimingReport report;
  std::vector<FactorMatrix<T>> outputs;  ///< from the last iteration
};

namespace detail {

inline double median_of(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace detail

/// Times `iters` full mode-by-mode sweeps. Every iteration consumes the
/// original factors (no chaining), so iterations are directly comparable.
template <typename T>
TimedRun<T> run_timed(const SparseTensorCOO<T>& t, const std::vector<ModePlan>& plans,
                      const std::vector<FactorMatrix<T>>& factors, const ExecConfig& config,
                      std::size_t iters) {
  if (iters < 1) throw error("kernel: iters must be at least 1");

  TimedRun<T> run;
  run.report.iters = iters;
  run.report.modes.resize(plans.size());
  for (std::size_t d = 0; d < plans.size(); ++d) {
    auto& mt = run.report.modes[d];
    mt.mode = plans[d].mode;
    mt.scheme = plans[d].scheme;
    for (std::size_t z = 0; z < plans[d].kappa; ++z) {
      const std::uint64_t size = plans[d].partition_size(z);
      mt.elements_per_worker.push_back(size);
      mt.busy_workers += size > 0;
    }
  }

  using clock = std::chrono::steady_clock;
  for (std::size_t it = 0; it < iters; ++it) {
    std::vector<FactorMatrix<T>> outputs;
    outputs.reserve(plans.size());
    double iter_total = 0;
    for (std::size_t d = 0; d < plans.size(); ++d) {
      const auto t0 = clock::now();
      outputs.push_back(mttkrp_mode(t, plans[d], factors, config));
      const auto t1 = clock::now();
      const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      run.report.modes[d].wall_ms.push_back(ms);
      iter_total += ms;
    }
    run.report.total_ms.push_back(iter_total);
    if (it == 0)
      run.outputs = std::move(outputs);
    else if (run.report.outputs_bit_identical && !bitwise_equal(outputs, run.outputs))
      run.report.outputs_bit_identical = false;
    if (it == iters - 1 && it > 0) run.outputs = std::move(outputs);
  }

  for (auto& mt : run.report.modes) {
    mt.min_ms = *std::min_element(mt.wall_ms.begin(), mt.wall_ms.end());
    mt.median_ms = detail::median_of(mt.wall_ms);
  }
  run.report.total_min_ms = *std::min_element(run.report.total_ms.begin(), run.report.total_ms.end());
  run.report.total_median_ms = detail::median_of(run.report.total_ms);
  return run;
}

}  // namespace mttkrp
