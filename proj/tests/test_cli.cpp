#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include <sys/wait.h>

#include "npkernel/oracle.hpp"
#include "test_support.hpp"

using namespace npkernel;
using npkernel::testing::TempDir;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run cli(const std::string& args, const fs::path& dir) {
  const auto out = dir / "stdout.txt";
  const auto cmd = fmt::format("\"{}\" {} > \"{}\" 2> \"{}\"", NPKERNEL_CLI, args, out.string(), (dir / "stderr.txt").string());
  const int status = std::system(cmd.c_str());
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string data_rows(const std::string& csv) { return csv.substr(csv.find('\n') + 1); }

std::string tiny() { return (npkernel::testing::fixture_dir() / "tiny").string(); }
std::string proteins() { return (npkernel::testing::fixture_dir() / "proteins_mini").string(); }

}  // namespace

TEST(Cli, NpoDiagonalIsEdgeCount) {
  TempDir dir("cli_diag");
  const auto out = dir.path() / "k.csv";
  ASSERT_EQ(cli(fmt::format("gram --dataset {} --kernel npo --h 1 --format csv -o {}", tiny(), out.string()), dir.path()).code, 0);
  const auto rows = read_gram_csv(out);
  const std::vector<double> edges{4, 3, 4, 3, 2};
  ASSERT_EQ(rows.size(), edges.size());
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(rows[i][i], edges[i]);
  EXPECT_TRUE(fs::exists(out.string() + ".json"));
}

TEST(Cli, AlphaOneEqualsNpe) {
  TempDir dir("cli_alpha");
  const auto np = dir.path() / "np.csv";
  const auto npe = dir.path() / "npe.csv";
  ASSERT_EQ(cli(fmt::format("gram --dataset {} --kernel np --alpha 1 -o {}", proteins(), np.string()), dir.path()).code, 0);
  ASSERT_EQ(cli(fmt::format("gram --dataset {} --kernel npe -o {}", proteins(), npe.string()), dir.path()).code, 0);
  EXPECT_EQ(data_rows(slurp(np)), data_rows(slurp(npe)));
}

TEST(Cli, SchemesAgree) {
  TempDir dir("cli_scheme");
  for (const auto& data : {tiny(), proteins()}) {
    const auto g = dir.path() / "g.csv";
    const auto p = dir.path() / "p.csv";
    ASSERT_EQ(cli(fmt::format("gram --dataset {} --scheme global -o {}", data, g.string()), dir.path()).code, 0);
    ASSERT_EQ(cli(fmt::format("gram --dataset {} --scheme pairwise -o {}", data, p.string()), dir.path()).code, 0);
    const auto a = read_gram_csv(g);
    const auto b = read_gram_csv(p);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < a.size(); ++j) EXPECT_LE(oracle::relative_error(a[i][j], b[i][j]), 1e-9);
    }
  }
}

TEST(Cli, WorkerCountIsByteIdentical) {
  TempDir dir("cli_workers");
  const auto one = dir.path() / "1.csv";
  const auto four = dir.path() / "4.csv";
  ASSERT_EQ(cli(fmt::format("gram --dataset {} --workers 1 -o {}", proteins(), one.string()), dir.path()).code, 0);
  ASSERT_EQ(cli(fmt::format("--workers 4 gram --dataset {} -o {}", proteins(), four.string()), dir.path()).code, 0);
  EXPECT_EQ(slurp(one), slurp(four));
  const auto env = dir.path() / "env.csv";
  const auto cmd = fmt::format("NPKERNEL_WORKERS=3 \"{}\" gram --dataset {} -o {}", NPKERNEL_CLI, proteins(), env.string());
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_EQ(slurp(one), slurp(env));
}

TEST(Cli, BinaryOutputWithSidecar) {
  TempDir dir("cli_bin");
  const auto bin = dir.path() / "k.bin";
  const auto timing = dir.path() / "t.json";
  ASSERT_EQ(cli(fmt::format("gram --dataset {} --format binary -o {} --timing {}", tiny(), bin.string(), timing.string()),
                dir.path()).code, 0);
  EXPECT_EQ(read_gram_binary(bin).size(), 25u);
  EXPECT_TRUE(nlohmann::json::parse(slurp(bin.string() + ".json")).contains("config"));
  EXPECT_TRUE(nlohmann::json::parse(slurp(timing)).contains("total"));
}

TEST(Cli, ExitCodes) {
  TempDir dir("cli_exit");
  EXPECT_EQ(cli("gram --dataset /nonexistent/none", dir.path()).code, 1);
  EXPECT_EQ(cli(fmt::format("gram --dataset {} --kernel bogus", tiny()), dir.path()).code, 1);
  EXPECT_EQ(cli(fmt::format("gram --dataset {} --alpha 3", tiny()), dir.path()).code, 1);
  EXPECT_EQ(cli(fmt::format("gram --dataset {} --scheme pairwise --edge-budget 1", tiny()), dir.path()).code, 2);
  EXPECT_EQ(cli("synth --graphs 2 -o x", dir.path()).code, 1);
  EXPECT_EQ(cli("", dir.path()).code, 1);
}

TEST(Cli, SynthRoundTrip) {
  TempDir dir("cli_synth");
  const auto out = dir.path() / "syn";
  ASSERT_EQ(cli(fmt::format("synth --seed 5 --graphs 4 --nodes 10 --density 0.3 --labels 3 --attr-dim 2 -o {}", out.string()),
                dir.path()).code, 0);
  const auto ds = parse_tu_dataset(out, "syn");
  SyntheticParams p;
  p.n_graphs = 4;
  p.n_nodes = 10;
  p.density = 0.3;
  p.label_alphabet_size = 3;
  p.attribute_dim = 2;
  p.seed = 5;
  const auto expected = generate_synthetic(p);
  ASSERT_EQ(ds.size(), expected.size());
  for (std::size_t i = 0; i < ds.size(); ++i) EXPECT_EQ(ds.graphs[i].edge_count(), expected.graphs[i].edge_count());
  const auto again = dir.path() / "again";
  ASSERT_EQ(cli(fmt::format("synth --seed 5 --graphs 4 --nodes 10 --density 0.3 --labels 3 --attr-dim 2 -o {} --name syn",
                            again.string()), dir.path()).code, 0);
  EXPECT_EQ(slurp(out / "syn_A.txt"), slurp(again / "syn_A.txt"));
}

TEST(Cli, BenchRows) {
  TempDir dir("cli_bench");
  const auto out = dir.path() / "b.csv";
  ASSERT_EQ(cli(fmt::format("bench --seed 3 --graphs 6 --nodes 12 --densities 0.2,0.4 --alphabets 2,3 -o {}", out.string()),
                dir.path()).code, 0);
  std::istringstream in(slurp(out));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "density,sigma,sigma_c,lambda,t_pairwise,t_global");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 4u);
  EXPECT_EQ(cli("bench --graphs 6", dir.path()).code, 1);
}

TEST(Cli, BenchLambdaMatchesFeatureIndex) {
  TempDir dir("cli_bench_lambda");
  const auto out = dir.path() / "b.csv";
  ASSERT_EQ(cli(fmt::format("bench --seed 4 --graphs 2 --nodes 15 --densities 0.3 --alphabets 2 -o {}", out.string()),
                dir.path()).code, 0);
  std::istringstream in(slurp(out));
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  double density = 0.0, tp = 0.0, tg = 0.0;
  std::size_t sigma = 0, sigma_c = 0, lambda = 0;
  char c = 0;
  std::istringstream row(line);
  row >> density >> c >> sigma >> c >> sigma_c >> c >> lambda >> c >> tp >> c >> tg;
  EXPECT_GT(tp, 0.0);
  EXPECT_GT(tg, 0.0);

  SyntheticParams p;
  p.n_graphs = 2;
  p.n_nodes = 15;
  p.density = 0.3;
  p.label_alphabet_size = 2;
  p.seed = 4;
  const auto ds = generate_synthetic(p);
  ColorDictionary dict;
  const auto a = refine(ds, 2, dict);
  std::set<EdgeAddress> distinct;
  for (std::size_t level = 1; level <= 2; ++level) {
    for (std::size_t gi = 0; gi < ds.size(); ++gi) {
      const auto& g = ds.graphs[gi];
      for (std::uint32_t e = 0; e < g.edge_count(); ++e) distinct.insert(edge_address(a[gi], level, g.edge(e), g.edge_label(e)));
    }
  }
  EXPECT_EQ(lambda, distinct.size());
  EXPECT_EQ(sigma_c, dict.size());
}

TEST(Cli, Validate) {
  TempDir dir("cli_validate");
  const auto r = cli("validate --seed 9 --npe-pairs 5 --npo-pairs 5 --nps-pairs 3", dir.path());
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("rel_error"), std::string::npos);
  EXPECT_EQ(cli(fmt::format("validate --dataset {}", tiny()), dir.path()).code, 0);
}

TEST(Cli, InspectDot) {
  TempDir dir("cli_inspect");
  const auto r = cli(fmt::format("inspect --dataset {} --pair 0 0 --h 1", tiny()), dir.path());
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("graph np_G0"), std::string::npos);
  EXPECT_EQ(r.out.find("style=dashed"), std::string::npos);
  EXPECT_EQ(cli(fmt::format("inspect --dataset {} --pair 0 9", tiny()), dir.path()).code, 1);
}
