#pragma once

// Shared helpers for the test suites: random instance generators and fixture
// loading. Kept independent of the layout/kernel internals under test.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mttkrp/factor.hpp"
#include "mttkrp/rng.hpp"
#include "mttkrp/synthetic.hpp"
#include "mttkrp/tensor.hpp"

namespace testsupport {

inline std::filesystem::path fixture_dir() {
#ifdef MTTKRP_FIXTURE_DIR
  return MTTKRP_FIXTURE_DIR;
#else
  return "tests/fixtures";
#endif
}

/// Random tensor with the given mode count and bounded extents/nnz. Values
/// may be negative (unlike the library generator) to exercise cancellation.
template <typename T = float>
mttkrp::SparseTensorCOO<T> random_tensor(mttkrp::rng::engine& g, std::size_t n_modes,
                                         mttkrp::index_t max_extent, std::size_t max_nnz,
                                         bool signed_values = false) {
  std::vector<mttkrp::index_t> dims;
  std::uint64_t cap = 1;
  for (std::size_t d = 0; d < n_modes; ++d) {
    dims.push_back(static_cast<mttkrp::index_t>(1 + mttkrp::rng::bounded(g, max_extent)));
    cap *= dims.back();
  }
  std::size_t nnz = static_cast<std::size_t>(
      mttkrp::rng::bounded(g, std::min<std::uint64_t>(cap, max_nnz) + 1));

  mttkrp::SyntheticSpec spec;
  spec.dims = dims;
  spec.nnz = nnz;
  spec.seed = g();
  auto t = mttkrp::generate_synthetic<T>(spec);
  if (!signed_values) return t;

  std::vector<mttkrp::index_t> coords(t.nnz() * n_modes);
  std::vector<T> values(t.nnz());
  for (std::size_t i = 0; i < t.nnz(); ++i) {
    auto c = t.coords(i);
    std::copy(c.begin(), c.end(), coords.begin() + i * n_modes);
    values[i] = t.value(i) * (mttkrp::rng::bounded(g, 2) ? T{1} : T{-1});
  }
  return mttkrp::SparseTensorCOO<T>::from_parts(t.shape(), std::move(coords), std::move(values));
}

/// 2-mode tensor whose mode-0 degree profile equals `degrees` (vertex v gets
/// degrees[v] incident elements).
inline mttkrp::SparseTensorCOO<float> tensor_with_mode0_degrees(
    const std::vector<std::uint64_t>& degrees) {
  std::uint64_t max_deg = 1;
  for (auto d : degrees) max_deg = std::max(max_deg, d);
  mttkrp::SparseTensorCOO<float> t(mttkrp::Shape(
      {static_cast<mttkrp::index_t>(degrees.size()), static_cast<mttkrp::index_t>(max_deg)}));
  for (mttkrp::index_t v = 0; v < degrees.size(); ++v)
    for (mttkrp::index_t k = 0; k < degrees[v]; ++k) t.add({v, k}, 1.0f);
  return t;
}

template <typename T>
struct GoldenCase {
  std::vector<mttkrp::FactorMatrix<T>> factors;
  std::vector<mttkrp::FactorMatrix<T>> expected;
};

template <typename T = double>
GoldenCase<T> load_golden_factors(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw mttkrp::error("cannot open fixture " + path.string());
  nlohmann::json j;
  in >> j;

  auto parse_matrices = [&](const nlohmann::json& arr) {
    std::vector<mttkrp::FactorMatrix<T>> out;
    for (std::size_t d = 0; d < arr.size(); ++d) {
      const auto& rows = arr[d];
      auto m = mttkrp::FactorMatrix<T>::zeros(d, static_cast<mttkrp::index_t>(rows.size()),
                                              j["rank"].get<std::size_t>());
      for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t r = 0; r < m.rank; ++r)
          m.at(static_cast<mttkrp::index_t>(i), r) = rows[i][r].get<T>();
      out.push_back(std::move(m));
    }
    return out;
  };
  return {parse_matrices(j["factors"]), parse_matrices(j["expected"])};
}

}  // namespace testsupport
