#pragma once

#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mttkrp/tensor.hpp"
#include "mttkrp/types.hpp"

namespace mttkrp {

/// FROSTT `.tns` text conventions: one element per line, whitespace-separated
/// tokens, N 1-based integer indices followed by a floating-point value.
/// Lines starting with `#` and blank lines are ignored. No header.
struct FrosttOptions {
  /// Sum the values of repeated index tuples instead of rejecting them.
  bool merge_duplicates = true;
  /// Explicit per-mode extents; empty means infer the extent of each mode
  /// as the largest index observed in it.
  std::vector<index_t> dims_override;
};

template <typename T>
struct FrosttParseResult {
  SparseTensorCOO<T> tensor;
  std::size_t duplicates_merged = 0;
};

namespace detail {

inline void split_tokens(std::string_view line, std::vector<std::string_view>& out) {
  out.clear();
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
}

inline std::uint64_t parse_index_token(std::string_view tok, std::size_t line_no) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw error("frostt: line " + std::to_string(line_no) + ": non-numeric index token '" +
                std::string(tok) + "'");
  return v;
}

template <typename T>
T parse_value_token(std::string_view tok, std::size_t line_no) {
  T v{};
  auto [ptr, ec] =
      std::from_chars(tok.data(), tok.data() + tok.size(), v, std::chars_format::general);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw error("frostt: line " + std::to_string(line_no) + ": bad value token '" +
                std::string(tok) + "'");
  if (!std::isfinite(static_cast<double>(v)))
    throw error("frostt: line " + std::to_string(line_no) + ": non-finite value");
  return v;
}

}  // namespace detail

template <typename T = float>
FrosttParseResult<T> parse_frostt(std::istream& in, const FrosttOptions& opt = {}) {
  std::vector<index_t> coords;
  std::vector<T> values;
  std::vector<std::uint64_t> max_index;  // 1-based per mode
  std::size_t n_modes = 0;

  std::unordered_map<std::vector<index_t>, std::size_t, detail::CoordTupleHash> seen;
  std::size_t duplicates = 0;

  std::string line;
  std::vector<std::string_view> toks;
  std::vector<index_t> tuple;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv(line);
    std::size_t first = sv.find_first_not_of(" \t\r\n\v\f");
    if (first == std::string_view::npos || sv[first] == '#') continue;

    detail::split_tokens(sv, toks);
    if (n_modes == 0) {
      if (toks.size() < 2)
        throw error("frostt: line " + std::to_string(line_no) +
                    ": need at least one index and a value");
      n_modes = toks.size() - 1;
      max_index.assign(n_modes, 0);
    } else if (toks.size() != n_modes + 1) {
      throw error("frostt: line " + std::to_string(line_no) + ": expected " +
                  std::to_string(n_modes + 1) + " tokens, got " + std::to_string(toks.size()));
    }

    tuple.clear();
    for (std::size_t h = 0; h < n_modes; ++h) {
      std::uint64_t raw = detail::parse_index_token(toks[h], line_no);
      if (raw < 1)
        throw error("frostt: line " + std::to_string(line_no) + ": index " +
                    std::to_string(raw) + " < 1 (indices are 1-based)");
      if (raw > max_extent)
        throw error("frostt: line " + std::to_string(line_no) + ": index " +
                    std::to_string(raw) + " exceeds the 32-bit coordinate range");
      max_index[h] = std::max(max_index[h], raw);
      tuple.push_back(static_cast<index_t>(raw - 1));
    }
    T val = detail::parse_value_token<T>(toks.back(), line_no);

    auto [it, inserted] = seen.try_emplace(tuple, values.size());
    if (inserted) {
      coords.insert(coords.end(), tuple.begin(), tuple.end());
      values.push_back(val);
    } else if (opt.merge_duplicates) {
      values[it->second] += val;
      ++duplicates;
    } else {
      std::string pos;
      for (index_t c : tuple) pos += std::to_string(static_cast<std::uint64_t>(c) + 1) + " ";
      throw error("frostt: line " + std::to_string(line_no) + ": duplicate index tuple " + pos +
                  "(merging disabled)");
    }
  }

  if (n_modes == 0) throw error("frostt: empty input (no element lines)");

  for (T v : values)
    if (!std::isfinite(static_cast<double>(v)))
      throw error("frostt: merged duplicate values are non-finite");

  std::vector<index_t> dims;
  if (!opt.dims_override.empty()) {
    if (opt.dims_override.size() != n_modes)
      throw error("frostt: dims override has " + std::to_string(opt.dims_override.size()) +
                  " modes, file has " + std::to_string(n_modes));
    for (std::size_t h = 0; h < n_modes; ++h)
      if (opt.dims_override[h] < max_index[h])
        throw error("frostt: dims override extent " + std::to_string(opt.dims_override[h]) +
                    " below largest index " + std::to_string(max_index[h]) + " in mode " +
                    std::to_string(h));
    dims = opt.dims_override;
  } else {
    dims.reserve(n_modes);
    for (std::uint64_t m : max_index) dims.push_back(static_cast<index_t>(m));
  }

  return {SparseTensorCOO<T>::from_parts(Shape(std::move(dims)), std::move(coords),
                                         std::move(values)),
          duplicates};
}

template <typename T = float>
FrosttParseResult<T> parse_frostt(std::string_view text, const FrosttOptions& opt = {}) {
  std::istringstream in{std::string(text)};
  return parse_frostt<T>(in, opt);
}

/// Writes one line per element: 1-based indices then the value, rendered as
/// the shortest decimal string that parses back to the identical bits.
template <typename T>
void write_frostt(const SparseTensorCOO<T>& t, std::ostream& out) {
  char buf[64];
  std::string line;
  for (std::size_t i = 0; i < t.nnz(); ++i) {
    line.clear();
    for (index_t c : t.coords(i)) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, static_cast<std::uint64_t>(c) + 1);
      line.append(buf, ptr);
      line.push_back(' ');
    }
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, t.value(i));
    line.append(buf, ptr);
    line.push_back('\n');
    out.write(line.data(), static_cast<std::streamsize>(line.size()));
  }
  if (!out) throw error("frostt: write failed");
}

template <typename T>
std::string write_frostt_string(const SparseTensorCOO<T>& t) {
  std::ostringstream out;
  write_frostt(t, out);
  return out.str();
}

template <typename T = float>
FrosttParseResult<T> read_frostt_file(const std::filesystem::path& path,
                                      const FrosttOptions& opt = {}) {
  std::ifstream in(path);
  if (!in) throw error("frostt: cannot open '" + path.string() + "'");
  return parse_frostt<T>(in, opt);
}

template <typename T>
void write_frostt_file(const SparseTensorCOO<T>& t, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw error("frostt: cannot create '" + path.string() + "'");
  write_frostt(t, out);
}

}  // namespace mttkrp
