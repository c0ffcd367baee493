#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/os.h>
#include "json.hpp"

#include "npkernel/error.hpp"
#include "npkernel/gram.hpp"

namespace npkernel {

inline std::string gram_header(const KernelConfig& c) {
  return fmt::format("# npkernel gram kernel={} h={} alpha={} base={} scheme={}", to_string(c.kernel), c.h, c.alpha,
                     describe(c.base), to_string(c.scheme));
}

// Header line followed by n comma-separated rows. Values use the shortest
// representation that reads back to the same double.
inline std::string format_gram_csv(const GramMatrix& gm) {
  std::string out = gram_header(gm.config);
  out += '\n';
  for (std::size_t i = 0; i < gm.n; ++i) {
    for (std::size_t j = 0; j < gm.n; ++j) {
      if (j) out += ',';
      out += fmt::format("{}", gm(i, j));
    }
    out += '\n';
  }
  return out;
}

inline void write_gram_csv(const GramMatrix& gm, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write {}", path.string()));
  out << format_gram_csv(gm);
}

// Values of a CSV written by write_gram_csv; the header line is skipped.
inline std::vector<std::vector<double>> read_gram_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(fmt::format("cannot open {}", path.string()));
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (start <= line.size()) {
      auto comma = line.find(',', start);
      if (comma == std::string::npos) comma = line.size();
      row.push_back(std::stod(line.substr(start, comma - start)));
      start = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline nlohmann::json config_json(const KernelConfig& c) {
  nlohmann::json base{{"kind", to_string(c.base.kind)}};
  if (c.base.beta) base["beta"] = *c.base.beta;
  return {{"kernel", to_string(c.kernel)},
          {"h", c.h},
          {"alpha", c.alpha},
          {"base", base},
          {"include_level0", c.include_level0},
          {"scheme", to_string(c.scheme)},
          {"normalize_gram", c.normalize_gram},
          {"max_path_len", c.max_path_len},
          {"nps_normalize", c.nps_normalize}};
}

inline nlohmann::json timing_json(const GramMatrix& gm) {
  nlohmann::json t = nlohmann::json::object();
  for (const auto& [phase, seconds] : gm.timing) t[phase] = seconds;
  return t;
}

// Raw little-endian float64 row-major values plus `<path>.json` metadata.
inline void write_gram_binary(const GramMatrix& gm, const std::filesystem::path& path) {
  static_assert(std::endian::native == std::endian::little, "binary Gram output assumes a little-endian host");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write {}", path.string()));
  out.write(reinterpret_cast<const char*>(gm.values.data()), static_cast<std::streamsize>(gm.values.size() * sizeof(double)));

  nlohmann::json meta{{"format", "float64-le-row-major"},
                      {"n", gm.n},
                      {"graph_ids", gm.graph_ids},
                      {"config", config_json(gm.config)},
                      {"timing", timing_json(gm)}};
  std::ofstream side(path.string() + ".json");
  side << meta.dump(2) << '\n';
}

inline std::vector<double> read_gram_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw ParseError(fmt::format("cannot open {}", path.string()));
  const auto bytes = static_cast<std::size_t>(in.tellg());
  if (bytes % sizeof(double) != 0) throw ParseError("binary Gram size is not a multiple of 8 bytes");
  std::vector<double> values(bytes / sizeof(double));
  in.seekg(0);
  in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(bytes));
  return values;
}

}  // namespace npkernel
