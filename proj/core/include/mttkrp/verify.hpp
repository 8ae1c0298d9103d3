#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "mttkrp/factor.hpp"
#include "mttkrp/types.hpp"

namespace mttkrp {

/// Scale-aware elementwise comparison: |got - want| / max(1, |want|), so
/// entries below 1 are held to absolute error and larger entries to
/// relative error.
struct VerifyResult {
  double max_rel_err = 0.0;
  index_t worst_row = 0;
  std::size_t worst_col = 0;
};

template <typename T>
VerifyResult verify_against(const FactorMatrix<T>& got, const FactorMatrix<T>& want) {
  if (got.rows != want.rows || got.rank != want.rank)
    throw error("verify: matrix shapes differ");
  VerifyResult res;
  for (index_t i = 0; i < got.rows; ++i) {
    for (std::size_t r = 0; r < got.rank; ++r) {
      const double g = static_cast<double>(got.at(i, r));
      const double w = static_cast<double>(want.at(i, r));
      const double err = std::abs(g - w) / std::max(1.0, std::abs(w));
      if (err > res.max_rel_err) {
        res.max_rel_err = err;
        res.worst_row = i;
        res.worst_col = r;
      }
    }
  }
  return res;
}

/// Agreement tolerance against the sequential reference for each precision.
template <typename T>
constexpr double verify_tolerance() {
  return sizeof(T) == 4 ? 1e-5 : 1e-12;
}

}  // namespace mttkrp
