#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "arbor/error.hpp"
#include "arbor/generators.hpp"
#include "arbor/graph_io.hpp"
#include "arbor/verify.hpp"
#include "support.hpp"

using namespace arbor;
namespace fs = std::filesystem;

namespace {

const fs::path& scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("arbor_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

test::CommandResult arbor_cli(const std::string& args, const std::string& env = "") {
  return test::run_command(env + " " ARBOR_CLI_PATH " " + args + " 2>/dev/null");
}

const std::string kC3 = "3 3\n0 1 1\n1 2 1\n2 0 1\n";
const std::string kK3 = "3 3 undirected\n0 1 1\n0 2 1\n1 2 1\n";
const std::string kK4 = "4 6 undirected\n0 1 1\n0 2 1\n0 3 1\n1 2 1\n1 3 1\n2 3 1\n";
const std::string kBarbell = "# a=0 b=1 c=2\n3 4\n0 1 1000\n1 0 1000\n1 2 1\n2 1 1\n";

std::map<std::string, double> line_frequencies(const std::string& out) {
  std::map<std::string, double> freq;
  std::istringstream in(out);
  std::string line;
  double total = 0;
  while (std::getline(in, line)) {
    freq[line] += 1;
    total += 1;
  }
  for (auto& [k, v] : freq) v /= total;
  return freq;
}

}  // namespace

TEST_CASE("parse features") {
  const auto f = parse_graph("# comment\n\n2 3\n0 1 0.5\n  # indented comment\n1 0 3/4\n1 1 2e-1\n");
  CHECK(f.graph.vertex_count() == 2);
  CHECK(f.graph.edge_count() == 3);
  CHECK(f.exact_weights[0] == Rational(1, 2));
  CHECK(f.exact_weights[1] == Rational(3, 4));
  CHECK(f.exact_weights[2] == Rational(1, 5));
  CHECK(f.graph.edge(2).weight == 0.2);

  const auto u = parse_graph(kK3);
  CHECK(u.undirected);
  CHECK(u.graph.edge_count() == 6);
  CHECK(u.graph.edge(2).src == 0);
  CHECK(u.graph.edge(2).dst == 2);
  CHECK(u.graph.edge(3).src == 2);
  CHECK(u.graph.edge(3).dst == 0);

  CHECK(parse_weight("007") == 7);
  CHECK(parse_weight("1.25") == Rational(5, 4));
  CHECK(parse_weight("2.5E2") == 250);
  CHECK(parse_weight("6/4") == Rational(3, 2));
}

TEST_CASE("parse errors carry line numbers") {
  const std::vector<std::pair<std::string, std::string>> bad{
      {"2 1\n0 2 1\n", "line 2"},       {"2 2\n0 1 1\n", "line"},          {"2 1\n0 1 -1\n", "line 2"},
      {"2 1\n0 1 0\n", "line 2"},       {"x\n", "line 1"},                 {"2 1 directed\n0 1 1\n", "line 1"},
      {"2 1\n0 1 1\n1 0 1\n", "line 3"}, {"# c\n2 1\n0 1 abc\n", "line 3"}, {"2 1\n0 1 1/0\n", "line 2"},
  };
  for (const auto& [text, where] : bad) {
    try {
      parse_graph(text);
      FAIL("accepted " << text);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Parse);
      CHECK(std::string(e.what()).find(where) != std::string::npos);
    }
  }
}

TEST_CASE("format and parse round-trip") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> w(1e-6, 1e6);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto base = gen::random_strongly_connected(1 + seed % 9, seed % 7, 9, seed);
    std::vector<Edge> edges(base.edges().begin(), base.edges().end());
    for (Edge& e : edges) e.weight = seed % 2 ? w(rng) : e.weight / 3;
    const WeightedDigraph g(base.vertex_count(), edges);
    const auto back = parse_graph(format_graph(g));
    CHECK(back.graph == g);
    CHECK(back.exact_weights == exact_weights(g));
  }
}

TEST_CASE("arborescence lines") {
  const auto g = gen::bidirected_complete(3);
  CHECK(format_arborescence(g, {0, {kNoEdge, 4, 3}}) == "root=0; 1:2,2:0");
  CHECK(format_arborescence(WeightedDigraph(1, {{0, 0, 1}}), {0, {kNoEdge}}) == "root=0;");
}

TEST_CASE("count subcommand") {
  CHECK(arbor_cli("count --graph " + write_file("c3.txt", kC3) + " --root 0").out == "1\n");
  CHECK(arbor_cli("count --graph " + write_file("k3.txt", kK3) + " --root 0").out == "3\n");
  CHECK(arbor_cli("count --graph " + write_file("k4.txt", kK4) + " --root 0").out == "16\n");
  CHECK(arbor_cli("count --graph " + write_file("w.txt", "2 2\n0 1 1/3\n1 0 2\n") + " --root 1").out == "1/3\n");
}

TEST_CASE("sample subcommand") {
  const std::string c3 = write_file("c3.txt", kC3);
  const auto one = arbor_cli("sample --graph " + c3 + " --seed 1 --samples 1");
  CHECK(one.status == 0);
  const std::set<std::string> valid{"root=0; 1:2,2:0\n", "root=1; 0:1,2:0\n", "root=2; 0:1,1:2\n"};
  CHECK(valid.count(one.out) == 1);
  CHECK(arbor_cli("sample --graph " + c3 + " --seed 1 --samples 1").out == one.out);

  const std::string k3 = write_file("k3.txt", kK3);
  const auto a = arbor_cli("sample --graph " + k3 + " --seed 7 --samples 300", "ARBOR_WORKERS=1");
  const auto b = arbor_cli("sample --graph " + k3 + " --seed 7 --samples 300", "ARBOR_WORKERS=4");
  const auto c = arbor_cli("sample --graph " + k3 + " --seed 7 --samples 300", "ARBOR_WORKERS=8");
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 300);

  // Statistics go to stderr only.
  const auto stats = test::run_command(ARBOR_CLI_PATH " sample --graph " + k3 + " --seed 7 --samples 300 --stats 2>&1 >/dev/null");
  CHECK(stats.out.find("mean transcript records") != std::string::npos);
  CHECK(arbor_cli("sample --graph " + k3 + " --seed 7 --samples 300 --stats").out == a.out);
  CHECK(arbor_cli("sample --graph " + k3 + " --seed 7 --samples 5 --root 1").out.find("root=0") == std::string::npos);
}

TEST_CASE("sequential and hierarchical modes agree on K3") {
  const std::string k3 = write_file("k3.txt", kK3);
  const auto h = line_frequencies(arbor_cli("sample --graph " + k3 + " --seed 1 --samples 200000").out);
  const auto s = line_frequencies(arbor_cli("sample --graph " + k3 + " --seed 2 --samples 200000 --mode sequential").out);
  CHECK(h.size() == 9);
  CHECK(s.size() == 9);
  double tv = 0;
  for (const auto& [k, p] : h) tv += std::abs(p - (s.count(k) ? s.at(k) : 0.0));
  for (const auto& [k, p] : s)
    if (!h.count(k)) tv += p;
  CHECK(tv / 2 <= 0.02);
}

TEST_CASE("inspect subcommand") {
  const auto hier = arbor_cli("inspect --graph " + write_file("bar.txt", kBarbell) + " --stage hierarchy");
  CHECK(hier.status == 0);
  CHECK(hier.out.find("{0,1,2} w_max=1 jumping=2") != std::string::npos);
  CHECK(hier.out.find("{0,1} w_max=1000 jumping=2") != std::string::npos);

  const auto red = arbor_cli("inspect --graph " + write_file("c3.txt", kC3) + " --stage reduce");
  CHECK(red.out.find("patch edges: 1\n  0->2\n") != std::string::npos);

  const auto eul = arbor_cli("inspect --graph " + write_file("k3.txt", kK3) + " --stage reduce");
  CHECK(eul.out.find("patch edges: 0\n") != std::string::npos);
  const auto pos = eul.out.find("eulerian residual: ");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(eul.out.substr(pos + 19)) <= 1e-9);

  const auto chain = arbor_cli("inspect --graph " + write_file("chain.txt", "3 4\n0 1 1\n1 2 1\n1 0 1\n2 0 1\n") +
                               " --stage hierarchy");
  CHECK(chain.out.find("walk graph") != std::string::npos);
}

TEST_CASE("verify subcommand") {
  const auto k3 = arbor_cli("verify --graph " + write_file("k3.txt", kK3) + " --samples 200000 --seed 3");
  REQUIRE(k3.status == 0);
  const auto report = nlohmann::json::parse(k3.out);
  CHECK(report["schema"] == "1");
  CHECK(report["tv"].get<double>() <= 0.01);
  CHECK(report["samples"] == 200000);
  CHECK(report["per_tree_counts"].size() == 9);
  CHECK(report.contains("chi_square_p"));
  CHECK(report.contains("retries"));
  CHECK(report.contains("mean_budget_used"));

  const auto c3 = nlohmann::json::parse(
      arbor_cli("verify --graph " + write_file("c3.txt", kC3) + " --samples 100 --seed 1 --root 0").out);
  CHECK(c3["tv"].get<double>() == 0.0);
  const auto seq = nlohmann::json::parse(
      arbor_cli("verify --graph " + write_file("c3.txt", kC3) + " --samples 100 --seed 1 --root 0 --mode sequential").out);
  CHECK(seq["tv"].get<double>() == 0.0);
  CHECK(seq["mode"] == "sequential");
}

TEST_CASE("verify reports unknown trees from a broken sampler") {
  const GraphFile file = parse_graph(kK3);
  VerifyConfig config;
  config.samples = 10;
  const BatchSampler broken = [](const WeightedDigraph&, const VerifyConfig&) {
    SampleBatch batch;
    batch.trees.push_back({0, {kNoEdge, 4, 5}});  // 1 -> 2 -> 1 is a cycle
    return batch;
  };
  try {
    verify_report(file, config, broken);
    FAIL("expected UnknownTree");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownTree);
  }
}

TEST_CASE("exit codes") {
  CHECK(arbor_cli("count --graph " + write_file("bad.txt", "2 1\n0 5 1\n") + " --root 0").status == 2);
  CHECK(arbor_cli("count --graph " + (scratch() / "missing.txt").string() + " --root 0").status == 2);
  const std::string stuck = write_file("stuck.txt", "3 3\n0 1 1\n1 0 1\n2 0 1\n");
  CHECK(arbor_cli("sample --graph " + stuck + " --seed 1 --root 2").status == 3);
  CHECK(arbor_cli("sample --graph " + stuck + " --seed 1 --root 2 --mode sequential").status == 3);
  CHECK(arbor_cli("sample --graph " + stuck + " --seed 1").status == 0);
  CHECK(arbor_cli("sample --graph " + write_file("k4.txt", kK4) + " --seed 1 --budget 1 --max-rounds 1").status == 4);
  std::string big = "9 9\n";
  for (int v = 0; v < 9; ++v) big += std::to_string(v) + " " + std::to_string((v + 1) % 9) + " 1\n";
  CHECK(arbor_cli("verify --graph " + write_file("big.txt", big) + " --samples 10 --seed 1").status == 5);
  CHECK(arbor_cli("sample --seed 1").status == 1);
  CHECK(arbor_cli("frobnicate").status == 1);
  CHECK(arbor_cli("sample --graph " + stuck + " --seed 1 --root 7").status == 1);
}
