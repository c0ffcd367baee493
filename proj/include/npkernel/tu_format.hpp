#pragma once

// Reader and writer for the flat-text TU Dortmund graph dataset layout:
//   <name>_A.txt                 "u, v" per directed edge row, 1-based global node ids
//   <name>_graph_indicator.txt   graph id of node i on line i
//   <name>_node_labels.txt       optional, one label per node
//   <name>_node_attributes.txt   optional, comma-separated reals per node
//   <name>_edge_labels.txt       optional, one label per row of _A
//   <name>_edge_attributes.txt   optional, comma-separated reals per row of _A
//   <name>_graph_labels.txt      optional, one class per graph

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>
#include <fmt/os.h>

#include "npkernel/error.hpp"
#include "npkernel/graph.hpp"

namespace npkernel {

namespace tu_detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(fmt::format("cannot open {}", path.string()));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.emplace_back(trim(line));
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

inline std::optional<std::vector<std::string>> read_optional(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return std::nullopt;
  return read_lines(path);
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view text, const std::filesystem::path& file, std::size_t line) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParseError(fmt::format("{}:{}: cannot parse '{}' as a number", file.string(), line + 1, text));
  }
  return value;
}

inline std::vector<std::vector<double>> parse_real_rows(const std::vector<std::string>& lines,
                                                        const std::filesystem::path& file) {
  std::vector<std::vector<double>> rows;
  rows.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::vector<double> row;
    for (auto field : split_commas(lines[i])) row.push_back(parse_number<double>(field, file, i));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(fmt::format("{}:{}: attribute row has dimension {}, expected {}", file.string(), i + 1,
                                   row.size(), rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string format_row(std::span<const double> row) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out += ", ";
    out += fmt::format("{}", row[i]);
  }
  return out;
}

}  // namespace tu_detail

// Reads `<directory>/<name>_*.txt`. Graphs are ordered by ascending indicator value.
inline Dataset parse_tu_dataset(const std::filesystem::path& directory, const std::string& name) {
  using namespace tu_detail;
  auto file = [&](std::string_view suffix) { return directory / (name + std::string(suffix)); };

  const auto a_path = file("_A.txt");
  const auto ind_path = file("_graph_indicator.txt");
  if (!std::filesystem::exists(a_path)) throw ParseError(fmt::format("missing mandatory file {}", a_path.string()));
  if (!std::filesystem::exists(ind_path)) throw ParseError(fmt::format("missing mandatory file {}", ind_path.string()));

  const auto indicator_lines = read_lines(ind_path);
  const auto a_lines = read_lines(a_path);
  const auto node_label_lines = read_optional(file("_node_labels.txt"));
  const auto node_attr_lines = read_optional(file("_node_attributes.txt"));
  const auto edge_label_lines = read_optional(file("_edge_labels.txt"));
  const auto edge_attr_lines = read_optional(file("_edge_attributes.txt"));
  const auto graph_label_lines = read_optional(file("_graph_labels.txt"));

  const std::size_t total_nodes = indicator_lines.size();
  std::vector<long long> indicator(total_nodes);
  for (std::size_t i = 0; i < total_nodes; ++i) indicator[i] = parse_number<long long>(indicator_lines[i], ind_path, i);

  std::vector<long long> graph_values(indicator);
  std::sort(graph_values.begin(), graph_values.end());
  graph_values.erase(std::unique(graph_values.begin(), graph_values.end()), graph_values.end());
  const std::size_t graph_count = graph_values.size();

  std::vector<std::size_t> graph_of(total_nodes);
  std::vector<NodeId> local_of(total_nodes);
  std::vector<std::size_t> sizes(graph_count, 0);
  for (std::size_t i = 0; i < total_nodes; ++i) {
    const auto g = static_cast<std::size_t>(
        std::lower_bound(graph_values.begin(), graph_values.end(), indicator[i]) - graph_values.begin());
    graph_of[i] = g;
    local_of[i] = static_cast<NodeId>(sizes[g]++);
  }

  auto check_length = [&](const std::optional<std::vector<std::string>>& lines, std::size_t expected,
                          std::string_view suffix) {
    if (lines && lines->size() != expected) {
      throw ParseError(fmt::format("{} has {} rows, expected {}", file(suffix).string(), lines->size(), expected));
    }
  };
  check_length(node_label_lines, total_nodes, "_node_labels.txt");
  check_length(node_attr_lines, total_nodes, "_node_attributes.txt");
  check_length(edge_label_lines, a_lines.size(), "_edge_labels.txt");
  check_length(edge_attr_lines, a_lines.size(), "_edge_attributes.txt");
  check_length(graph_label_lines, graph_count, "_graph_labels.txt");

  Dataset ds;
  ds.name = name;

  // Per graph: undirected edge -> (edge label text, edge attribute row index)
  struct EdgeInfo {
    std::optional<std::string> label;
    std::optional<std::size_t> attr_row;
  };
  std::vector<std::map<Edge, EdgeInfo>> edge_maps(graph_count);
  std::vector<std::vector<double>> edge_attr_rows;
  if (edge_attr_lines) edge_attr_rows = parse_real_rows(*edge_attr_lines, file("_edge_attributes.txt"));

  for (std::size_t row = 0; row < a_lines.size(); ++row) {
    const auto fields = split_commas(a_lines[row]);
    if (fields.size() != 2) throw ParseError(fmt::format("{}:{}: expected 'u, v'", a_path.string(), row + 1));
    const auto u = parse_number<long long>(fields[0], a_path, row);
    const auto v = parse_number<long long>(fields[1], a_path, row);
    for (auto id : {u, v}) {
      if (id < 1 || static_cast<std::size_t>(id) > total_nodes) {
        throw ParseError(fmt::format("{}:{}: node id {} out of range [1, {}]", a_path.string(), row + 1, id, total_nodes));
      }
    }
    if (u == v) throw ParseError(fmt::format("{}:{}: self-loop on node {}", a_path.string(), row + 1, u));
    const auto gu = graph_of[static_cast<std::size_t>(u - 1)];
    const auto gv = graph_of[static_cast<std::size_t>(v - 1)];
    if (gu != gv) throw ParseError(fmt::format("{}:{}: edge joins nodes of different graphs", a_path.string(), row + 1));
    auto lu = local_of[static_cast<std::size_t>(u - 1)];
    auto lv = local_of[static_cast<std::size_t>(v - 1)];
    if (lu > lv) std::swap(lu, lv);
    auto& info = edge_maps[gu][Edge{lu, lv}];
    if (edge_label_lines) {
      const auto& text = (*edge_label_lines)[row];
      if (info.label && *info.label != text) {
        throw ParseError(fmt::format("{}:{}: edge ({}, {}) has conflicting labels '{}' and '{}'",
                                     file("_edge_labels.txt").string(), row + 1, u, v, *info.label, text));
      }
      info.label = text;
    }
    if (edge_attr_lines) {
      if (info.attr_row && edge_attr_rows[*info.attr_row] != edge_attr_rows[row]) {
        throw ParseError(fmt::format("{}:{}: edge ({}, {}) has conflicting attributes",
                                     file("_edge_attributes.txt").string(), row + 1, u, v));
      }
      info.attr_row = row;
    }
  }

  // Node labels: raw text, or the node degree when the label file is absent.
  std::vector<std::string> node_label_text(total_nodes);
  if (node_label_lines) {
    node_label_text = *node_label_lines;
  } else {
    std::vector<std::size_t> degree(total_nodes, 0);
    std::vector<std::vector<std::size_t>> globals(graph_count);
    for (std::size_t i = 0; i < total_nodes; ++i) globals[graph_of[i]].push_back(i);
    for (std::size_t g = 0; g < graph_count; ++g) {
      for (const auto& [e, info] : edge_maps[g]) {
        ++degree[globals[g][e.u]];
        ++degree[globals[g][e.v]];
      }
    }
    for (std::size_t i = 0; i < total_nodes; ++i) node_label_text[i] = std::to_string(degree[i]);
  }
  ds.node_symbols.intern_sorted(node_label_text);
  if (edge_label_lines) ds.edge_symbols.intern_sorted(*edge_label_lines);

  std::vector<std::vector<double>> node_attr_rows;
  if (node_attr_lines) {
    node_attr_rows = parse_real_rows(*node_attr_lines, file("_node_attributes.txt"));
    if (!node_attr_rows.empty()) ds.attribute_dim = node_attr_rows.front().size();
  }

  std::vector<GraphParts> parts(graph_count);
  for (std::size_t g = 0; g < graph_count; ++g) {
    parts[g].node_count = sizes[g];
    parts[g].graph_id = g;
    parts[g].node_labels.reserve(sizes[g]);
    if (node_attr_lines) parts[g].node_attributes.reserve(sizes[g]);
  }
  for (std::size_t i = 0; i < total_nodes; ++i) {
    auto& p = parts[graph_of[i]];
    p.node_labels.push_back(*ds.node_symbols.find(node_label_text[i]));
    if (node_attr_lines) p.node_attributes.push_back(node_attr_rows[i]);
  }
  for (std::size_t g = 0; g < graph_count; ++g) {
    auto& p = parts[g];
    for (const auto& [e, info] : edge_maps[g]) {
      p.edges.push_back(e);
      if (edge_label_lines) p.edge_labels.push_back(*ds.edge_symbols.find(*info.label));
      if (edge_attr_lines) p.edge_attributes.push_back(edge_attr_rows[*info.attr_row]);
    }
    ds.graphs.emplace_back(std::move(p));
  }

  if (graph_label_lines) {
    std::vector<int> labels;
    labels.reserve(graph_count);
    for (std::size_t i = 0; i < graph_label_lines->size(); ++i) {
      labels.push_back(parse_number<int>((*graph_label_lines)[i], file("_graph_labels.txt"), i));
    }
    ds.class_labels = std::move(labels);
  }

  validate_dataset(ds);
  return ds;
}

// Writes `ds` in the TU layout; every undirected edge is emitted in both directions.
inline void write_tu_dataset(const Dataset& ds, const std::filesystem::path& directory, const std::string& name) {
  std::filesystem::create_directories(directory);
  auto open = [&](std::string_view suffix) {
    return fmt::output_file((directory / (name + std::string(suffix))).string());
  };

  const bool edge_labels = std::any_of(ds.graphs.begin(), ds.graphs.end(), [](const Graph& g) { return g.has_edge_labels(); });
  const bool edge_attrs = std::any_of(ds.graphs.begin(), ds.graphs.end(), [](const Graph& g) { return g.has_edge_attributes(); });
  const bool node_attrs = std::any_of(ds.graphs.begin(), ds.graphs.end(), [](const Graph& g) { return g.has_node_attributes(); });

  auto a = open("_A.txt");
  auto indicator = open("_graph_indicator.txt");
  auto node_labels = open("_node_labels.txt");
  std::optional<fmt::ostream> node_attr_out, edge_label_out, edge_attr_out;
  if (node_attrs) node_attr_out.emplace(open("_node_attributes.txt"));
  if (edge_labels) edge_label_out.emplace(open("_edge_labels.txt"));
  if (edge_attrs) edge_attr_out.emplace(open("_edge_attributes.txt"));

  std::size_t offset = 1;
  for (std::size_t gi = 0; gi < ds.graphs.size(); ++gi) {
    const auto& g = ds.graphs[gi];
    for (NodeId v = 0; v < g.node_count(); ++v) {
      indicator.print("{}\n", gi + 1);
      node_labels.print("{}\n", ds.node_symbols.text(g.node_label(v)));
      if (node_attr_out) node_attr_out->print("{}\n", tu_detail::format_row(g.node_attributes(v)));
    }
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
      const auto& e = g.edge(i);
      for (auto [x, y] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
        a.print("{}, {}\n", offset + x, offset + y);
        if (edge_label_out) edge_label_out->print("{}\n", ds.edge_symbols.text(g.edge_label(i)));
        if (edge_attr_out) edge_attr_out->print("{}\n", tu_detail::format_row(g.edge_attributes(i)));
      }
    }
    offset += g.node_count();
  }
  if (ds.class_labels) {
    auto labels = open("_graph_labels.txt");
    for (int c : *ds.class_labels) labels.print("{}\n", c);
  }
}

}  // namespace npkernel
