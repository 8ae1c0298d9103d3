#pragma once

#include <nlohmann/json.hpp>

#include "mttkrp/kernel.hpp"
#include "mttkrp/layout.hpp"

namespace mttkrp {

nlohmann::json to_json(const BalanceMetrics& bm);
nlohmann::json to_json(const MemoryEstimate& m);
nlohmann::json to_json(const ModeTiming& mt);
nlohmann::json to_json(const TimingReport& r);

}  // namespace mttkrp
