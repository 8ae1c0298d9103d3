#include "mttkrp/report.hpp"

namespace mttkrp {

using nlohmann::json;

json to_json(const BalanceMetrics& bm) {
  return json{{"mode", bm.mode},
              {"scheme", to_string(bm.scheme)},
              {"kappa", bm.kappa},
              {"loads", bm.loads},
              {"owned_index_counts", bm.owned_index_counts},
              {"max_over_mean", bm.max_over_mean},
              {"empty_partitions", bm.empty_partitions}};
}

json to_json(const MemoryEstimate& m) {
  return json{{"bits_per_element", m.bits_per_element},
              {"total_copy_bits", m.total_copy_bits},
              {"total_copy_bytes", m.total_copy_bytes},
              {"factor_matrix_bytes", m.factor_matrix_bytes},
              {"storage_bytes_actual", m.storage_bytes_actual}};
}

json to_json(const ModeTiming& mt) {
  return json{{"mode", mt.mode},
              {"scheme", to_string(mt.scheme)},
              {"wall_ms", mt.wall_ms},
              {"min_ms", mt.min_ms},
              {"median_ms", mt.median_ms},
              {"busy_workers", mt.busy_workers},
              {"elements_per_worker", mt.elements_per_worker}};
}

json to_json(const TimingReport& r) {
  json modes = json::array();
  for (const auto& mt : r.modes) modes.push_back(to_json(mt));
  return json{{"iters", r.iters},
              {"modes", std::move(modes)},
              {"total_ms", r.total_ms},
              {"total_min_ms", r.total_min_ms},
              {"total_median_ms", r.total_median_ms},
              {"outputs_bit_identical", r.outputs_bit_identical}};
}

}  // namespace mttkrp
