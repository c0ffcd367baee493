#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include "CLI11.hpp"

#include "npkernel/npkernel.hpp"
#include "npkernel/oracle.hpp"

namespace fs = std::filesystem;
using namespace npkernel;

namespace {

struct KernelFlags {
  std::string kernel = "np";
  std::size_t h = 2;
  double alpha = 0.5;
  std::string base = "gaussian";
  std::optional<double> beta;
  bool include_level0 = false;
  std::string scheme = "global";
  bool normalize = false;
  std::size_t max_path_len = 0;
  bool nps_normalize = false;

  void add_to(CLI::App& app) {
    app.add_option("--kernel", kernel, "npe | npo | np | nps")->capture_default_str();
    app.add_option("--h", h, "WL refinement rounds")->capture_default_str();
    app.add_option("--alpha", alpha, "weight of the NPE part of NP")->capture_default_str();
    app.add_option("--base", base, "attribute base kernel: gaussian | linear | unit")->capture_default_str();
    app.add_option("--beta", beta, "gaussian bandwidth (default 1/d)");
    app.add_flag("--include-level0", include_level0, "also sum the unrefined level");
    app.add_option("--scheme", scheme, "global | pairwise")->capture_default_str();
    app.add_flag("--normalize", normalize, "cosine-normalize the Gram matrix");
    app.add_option("--max-path-len", max_path_len, "NPS path length limit (0 = none)")->capture_default_str();
    app.add_flag("--nps-normalize", nps_normalize, "NPS per-address 1/(|P||P'|) weight");
  }

  KernelConfig config() const {
    KernelConfig c;
    c.kernel = parse_kernel_type(kernel);
    c.h = h;
    c.alpha = alpha;
    c.base.kind = parse_base_kernel_kind(base);
    c.base.beta = beta;
    c.include_level0 = include_level0;
    c.scheme = parse_scheme(scheme);
    c.normalize_gram = normalize;
    c.max_path_len = max_path_len;
    c.nps_normalize = nps_normalize;
    try {
      validate_config(c);
    } catch (const ComputeError& e) {
      throw ParseError(e.what());
    }
    return c;
  }
};

struct DatasetFlags {
  std::string dir;
  std::string name;

  void add_to(CLI::App& app, bool required = true) {
    auto* opt = app.add_option("--dataset", dir, "directory holding <name>_A.txt and companions");
    if (required) opt->required();
    app.add_option("--name", name, "dataset file prefix (default: directory name)");
  }

  Dataset load() const {
    const fs::path p = fs::path(dir).lexically_normal();
    std::string prefix = name;
    if (prefix.empty()) prefix = p.filename().empty() ? p.parent_path().filename().string() : p.filename().string();
    return parse_tu_dataset(p, prefix);
  }
};

std::size_t resolve_workers(std::optional<std::size_t> flag) {
  if (flag) return std::max<std::size_t>(1, *flag);
  if (const char* env = std::getenv("NPKERNEL_WORKERS")) {
    try {
      return std::max<std::size_t>(1, std::stoul(env));
    } catch (const std::exception&) {
      throw ParseError(fmt::format("NPKERNEL_WORKERS={} is not a worker count", env));
    }
  }
  return 1;
}

void write_text(const std::optional<std::string>& path, const std::string& text) {
  if (!path) {
    std::cout << text;
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write {}", *path));
  out << text;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    const auto item = text.substr(start, comma - start);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParseError(fmt::format("'{}' is not a number in list '{}'", item, text));
    }
    start = comma + 1;
  }
  return out;
}


struct GramCmd {
  DatasetFlags data;
  KernelFlags kernel;
  std::string format = "csv";
  std::optional<std::string> output;
  std::optional<std::string> timing;
  std::optional<std::size_t> workers;
  std::size_t edge_budget = EngineOptions{}.product_edge_budget;

  int run() const {
    const auto ds = data.load();
    const auto config = kernel.config();
    const auto gm = gram(ds, config, {resolve_workers(workers), edge_budget});
    if (format == "csv") {
      write_text(output, format_gram_csv(gm));
      if (output) {
        nlohmann::json meta{{"format", "csv"},
                            {"n", gm.n},
                            {"graph_ids", gm.graph_ids},
                            {"config", config_json(gm.config)},
                            {"timing", timing_json(gm)}};
        write_text(*output + ".json", meta.dump(2) + "\n");
      }
    } else if (format == "binary") {
      if (!output) throw ParseError("--format binary requires --output");
      write_gram_binary(gm, *output);
    } else {
      throw ParseError(fmt::format("unknown format '{}'; expected csv or binary", format));
    }
    if (timing) write_text(*timing, timing_json(gm).dump(2) + "\n");
    return 0;
  }
};


struct BenchCmd {
  std::optional<std::uint64_t> seed;
  DatasetFlags data;
  KernelFlags kernel;
  std::size_t graphs = 30;
  std::size_t nodes = 60;
  std::string densities = "0.1,0.2,0.3,0.4";
  std::string alphabets = "2,3,4";
  std::size_t attr_dim = 0;
  std::size_t repeats = 1;
  std::optional<std::string> output;
  std::optional<std::size_t> workers;

  struct Row {
    double density;
    std::size_t sigma, sigma_c, lambda;
    double t_pairwise, t_global;
  };

  static std::size_t alphabet_size(const Dataset& ds) {
    std::set<Symbol> labels;
    for (const auto& g : ds.graphs) {
      for (NodeId v = 0; v < g.node_count(); ++v) labels.insert(g.node_label(v));
    }
    return labels.size();
  }

  static double mean_density(const Dataset& ds) {
    double sum = 0.0;
    for (const auto& g : ds.graphs) {
      const double n = static_cast<double>(g.node_count());
      sum += n > 1 ? static_cast<double>(g.edge_count()) / (n * (n - 1) / 2.0) : 0.0;
    }
    return ds.size() ? sum / static_cast<double>(ds.size()) : 0.0;
  }

  Row measure(const Dataset& ds, double density, KernelConfig config, std::size_t w) const {
    Row row{density, alphabet_size(ds), 0, 0, 0.0, 0.0};
    ColorDictionary dict;
    const auto a = refine(ds, config.h, dict);
    row.sigma_c = dict.size();
    std::set<EdgeAddress> lambda;
    for (auto level : kernel_levels(config)) {
      for (std::size_t gi = 0; gi < ds.size(); ++gi) {
        const FeatureIndex fi(ds.graphs[gi], a[gi], level);
        for (const auto& b : fi.buckets()) lambda.insert(b.address);
      }
    }
    row.lambda = lambda.size();
    row.t_pairwise = row.t_global = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < std::max<std::size_t>(1, repeats); ++r) {
      config.scheme = Scheme::pairwise;
      row.t_pairwise = std::min(row.t_pairwise, gram(ds, config, {w}).timing.at("total"));
      config.scheme = Scheme::global;
      row.t_global = std::min(row.t_global, gram(ds, config, {w}).timing.at("total"));
    }
    return row;
  }

  int run() const {
    auto config = kernel.config();
    if (config.kernel == KernelType::nps) throw ParseError("bench compares product-graph and global schemes; NPS has no product-graph scheme");
    const auto w = resolve_workers(workers);
    std::vector<Row> rows;
    if (!data.dir.empty()) {
      const auto ds = data.load();
      rows.push_back(measure(ds, mean_density(ds), config, w));
    } else {
      if (!seed) throw ParseError("bench on synthetic data requires --seed");
      for (double sigma : parse_grid(alphabets)) {
        for (double density : parse_grid(densities)) {
          SyntheticParams p;
          p.n_graphs = graphs;
          p.n_nodes = nodes;
          p.density = density;
          p.label_alphabet_size = static_cast<std::size_t>(sigma);
          p.attribute_dim = attr_dim;
          p.seed = *seed;
          rows.push_back(measure(generate_synthetic(p), density, config, w));
        }
      }
    }
    std::string out = "density,sigma,sigma_c,lambda,t_pairwise,t_global\n";
    for (const auto& r : rows) {
      out += fmt::format("{},{},{},{},{:.6f},{:.6f}\n", r.density, r.sigma, r.sigma_c, r.lambda, r.t_pairwise, r.t_global);
    }
    write_text(output, out);
    return 0;
  }
};


struct ValidateCmd {
  std::uint64_t seed = 1;
  DatasetFlags data;
  std::size_t h = 2;
  std::string base = "gaussian";
  std::size_t npe_pairs = 50;
  std::size_t npo_pairs = 50;
  std::size_t nps_pairs = 20;
  double tolerance = 1e-12;

  static Graph random_graph(std::mt19937_64& rng, std::size_t max_nodes) {
    SyntheticParams p;
    p.n_nodes = std::uniform_int_distribution<std::size_t>(3, max_nodes)(rng);
    p.density = std::uniform_real_distribution<double>(0.25, 0.6)(rng);
    p.label_alphabet_size = 2;
    p.attribute_dim = 2;
    p.seed = rng();
    return generate_synthetic(p).graphs.front();
  }

  int run() const {
    KernelConfig c;
    c.h = h;
    c.base.kind = parse_base_kernel_kind(base);
    std::vector<std::pair<Graph, Graph>> pairs;
    std::mt19937_64 rng(seed);
    std::optional<Dataset> ds;
    if (!data.dir.empty()) {
      ds = data.load();
      for (std::size_t i = 0; i < ds->size(); ++i) {
        for (std::size_t j = i; j < ds->size(); ++j) pairs.emplace_back(ds->graphs[i], ds->graphs[j]);
      }
    } else {
      const auto n = std::max({npe_pairs, npo_pairs, nps_pairs});
      for (std::size_t i = 0; i < n; ++i) {
        auto g = random_graph(rng, 12);
        auto gp = random_graph(rng, 12);
        pairs.emplace_back(std::move(g), std::move(gp));
      }
    }

    oracle::OracleReport report;
    std::uint64_t npo_mismatches = 0;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto& [g, gp] = pairs[k];
      const std::vector<Graph> both{g, gp};
      ColorDictionary dict;
      const auto a = refine(both, h, dict);
      const bool all = ds.has_value();
      if (all || k < npe_pairs) {
        auto e = c;
        e.kernel = KernelType::npe;
        report.add("npe", k, oracle::brute_npe(g, gp, h, c.base), npe_pair(g, gp, a[0], a[1], e));
      }
      if (all || k < npo_pairs) {
        const auto ref = oracle::brute_npo(g, gp, h);
        const auto prod = npo_pair(g, gp, a[0], a[1], h);
        npo_mismatches += ref != prod;
        report.add("npo", k, static_cast<double>(ref), static_cast<double>(prod));
      }
      if ((all && g.node_count() <= 12 && gp.node_count() <= 12) || (!all && k < nps_pairs)) {
        auto s = c;
        s.kernel = KernelType::nps;
        report.add("nps", k, oracle::brute_nps(g, gp, h, c.base), nps_pair(g, gp, a[0], a[1], s));
      }
    }
    std::cout << report.table();
    const double e_npe = report.max_error("npe");
    const double e_nps = report.max_error("nps");
    fmt::print("max rel_error npe={:.3e} npo_mismatches={} nps={:.3e}\n", e_npe, npo_mismatches, e_nps);
    if (e_npe > tolerance || e_nps > tolerance || npo_mismatches) {
      fmt::print(stderr, "validation failed: production kernels disagree with the reference beyond {:.0e}\n", tolerance);
      return 2;
    }
    return 0;
  }
};


struct SynthCmd {
  std::optional<std::uint64_t> seed;
  SyntheticParams params;
  std::string output;
  std::string name;

  int run() {
    if (!seed) throw ParseError("synth requires --seed");
    params.seed = *seed;
    const auto ds = generate_synthetic(params);
    const fs::path dir = fs::path(output).lexically_normal();
    std::string prefix = name;
    if (prefix.empty()) prefix = dir.filename().empty() ? dir.parent_path().filename().string() : dir.filename().string();
    write_tu_dataset(ds, dir, prefix);
    fmt::print("wrote {} graphs to {}\n", ds.size(), (dir / prefix).string());
    return 0;
  }
};


struct InspectCmd {
  DatasetFlags data;
  std::vector<std::size_t> pair;
  std::size_t h = 2;
  std::optional<std::string> output;

  int run() const {
    const auto ds = data.load();
    for (auto id : pair) {
      if (id >= ds.size()) throw ParseError(fmt::format("unknown graph id {}; dataset has graphs 0..{}", id, ds.size() - 1));
    }
    const auto& g = ds.graphs[pair[0]];
    const auto& gp = ds.graphs[pair[1]];
    const std::vector<Graph> both{g, gp};
    ColorDictionary dict;
    const auto a = refine(both, h, dict);
    std::string out;
    for (std::size_t level = 0; level <= h; ++level) {
      out += coloring_dot(g, a[0], level, fmt::format("G{}_level{}", pair[0], level));
      out += coloring_dot(gp, a[1], level, fmt::format("G{}_level{}", pair[1], level));
      const auto pg = build_product(g, gp, a[0], a[1], level);
      out += product_dot(pg, fmt::format("product_level{}", level));
      if (level == h) {
        out += np_partition_dot(g, np_edges(pg, Side::left), fmt::format("np_G{}", pair[0]));
        out += np_partition_dot(gp, np_edges(pg, Side::right), fmt::format("np_G{}", pair[1]));
      }
    }
    write_text(output, out);
    return 0;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neighborhood preserving graph kernels"};
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);
  std::optional<std::size_t> workers;
  app.add_option("--workers", workers, "worker threads (default: NPKERNEL_WORKERS or 1)");

  GramCmd gram_cmd;
  auto* gram_app = app.add_subcommand("gram", "compute a Gram matrix");
  gram_cmd.data.add_to(*gram_app);
  gram_cmd.kernel.add_to(*gram_app);
  gram_app->add_option("--format", gram_cmd.format, "csv | binary")->capture_default_str();
  gram_app->add_option("--output,-o", gram_cmd.output, "output file (csv default: stdout)");
  gram_app->add_option("--timing", gram_cmd.timing, "timing report JSON path");
  gram_app->add_option("--workers", gram_cmd.workers, "worker threads");
  gram_app->add_option("--edge-budget", gram_cmd.edge_budget, "pairwise product graph edge limit")->capture_default_str();

  BenchCmd bench_cmd;
  auto* bench_app = app.add_subcommand("bench", "time pairwise against global computation");
  bench_app->add_option("--seed", bench_cmd.seed, "RNG seed for synthetic datasets");
  bench_cmd.data.add_to(*bench_app, false);
  bench_cmd.kernel.base = "unit";
  bench_cmd.kernel.add_to(*bench_app);
  bench_app->add_option("--graphs", bench_cmd.graphs)->capture_default_str();
  bench_app->add_option("--nodes", bench_cmd.nodes)->capture_default_str();
  bench_app->add_option("--densities", bench_cmd.densities, "comma-separated densities")->capture_default_str();
  bench_app->add_option("--alphabets", bench_cmd.alphabets, "comma-separated label alphabet sizes")->capture_default_str();
  bench_app->add_option("--attr-dim", bench_cmd.attr_dim)->capture_default_str();
  bench_app->add_option("--repeats", bench_cmd.repeats, "timing repeats; the minimum is reported")->capture_default_str();
  bench_app->add_option("--output,-o", bench_cmd.output, "CSV output (default: stdout)");
  bench_app->add_option("--workers", bench_cmd.workers, "worker threads");

  ValidateCmd validate_cmd;
  auto* validate_app = app.add_subcommand("validate", "compare production kernels with brute-force references");
  validate_app->add_option("--seed", validate_cmd.seed)->capture_default_str();
  validate_cmd.data.add_to(*validate_app, false);
  validate_app->add_option("--h", validate_cmd.h)->capture_default_str();
  validate_app->add_option("--base", validate_cmd.base)->capture_default_str();
  validate_app->add_option("--npe-pairs", validate_cmd.npe_pairs)->capture_default_str();
  validate_app->add_option("--npo-pairs", validate_cmd.npo_pairs)->capture_default_str();
  validate_app->add_option("--nps-pairs", validate_cmd.nps_pairs)->capture_default_str();
  validate_app->add_option("--tolerance", validate_cmd.tolerance)->capture_default_str();

  SynthCmd synth_cmd;
  auto* synth_app = app.add_subcommand("synth", "write a synthetic dataset in TU layout");
  synth_app->add_option("--seed", synth_cmd.seed, "RNG seed")->required();
  synth_app->add_option("--graphs", synth_cmd.params.n_graphs)->capture_default_str();
  synth_app->add_option("--nodes", synth_cmd.params.n_nodes)->capture_default_str();
  synth_app->add_option("--density", synth_cmd.params.density)->capture_default_str();
  synth_app->add_option("--labels", synth_cmd.params.label_alphabet_size)->capture_default_str();
  synth_app->add_option("--attr-dim", synth_cmd.params.attribute_dim)->capture_default_str();
  synth_app->add_option("--classes", synth_cmd.params.n_classes)->capture_default_str();
  synth_app->add_option("--class-shift", synth_cmd.params.class_shift)->capture_default_str();
  synth_app->add_option("--output,-o", synth_cmd.output, "output directory")->required();
  synth_app->add_option("--name", synth_cmd.name, "file prefix (default: directory name)");

  InspectCmd inspect_cmd;
  auto* inspect_app = app.add_subcommand("inspect", "DOT rendering of colorings, product graphs and NP edges");
  inspect_cmd.data.add_to(*inspect_app);
  inspect_app->add_option("--pair", inspect_cmd.pair, "two graph ids (0-based)")->required()->expected(2);
  inspect_app->add_option("--h", inspect_cmd.h)->capture_default_str();
  inspect_app->add_option("--output,-o", inspect_cmd.output, "DOT output (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (!gram_cmd.workers) gram_cmd.workers = workers;
    if (!bench_cmd.workers) bench_cmd.workers = workers;
    if (*gram_app) return gram_cmd.run();
    if (*bench_app) return bench_cmd.run();
    if (*validate_app) return validate_cmd.run();
    if (*synth_app) return synth_cmd.run();
    if (*inspect_app) return inspect_cmd.run();
  } catch (const ParseError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  } catch (const ValidationError& e) {
    fmt::print(stderr, "invalid dataset:\n");
    for (const auto& d : e.diagnostics()) fmt::print(stderr, "  {}\n", d);
    return 1;
  } catch (const ComputeError& e) {
    fmt::print(stderr, "compute error: {}\n", e.what());
    return 2;
  } catch (const Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    fmt::print(stderr, "internal error: {}\n", e.what());
    return 2;
  }
  return 0;
}
