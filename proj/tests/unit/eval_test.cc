#include "eud/eval.h"

#include <random>
#include <sstream>

#include "doctest.h"
#include "eud/conllu.h"
#include "support/oracles.h"

namespace eud {
namespace {

Edge E(int h, int d, std::string label) {
  return {SurfaceNode(h), SurfaceNode(d), std::move(label)};
}

EnhancedGraph Graph(int n, std::vector<Edge> edges) {
  EnhancedGraph g;
  g.n = n;
  g.edges = std::move(edges);
  g.Normalize();
  return g;
}

TEST_CASE("identity scores one on every gold file") {
  for (const char* name : {"/en_sample.conllu", "/figure1.conllu"}) {
    std::vector<EnhancedGraph> g;
    for (const Sentence& s : ReadConlluFile(std::string(EUD_TEST_DATA) + name)) {
      g.push_back(s.enhanced);
    }
    CHECK(Elas(g, g).f1() == 1.0);
    CHECK(Eulas(g, g).f1() == 1.0);
  }
}

TEST_CASE("one missing edge out of ten") {
  std::vector<Edge> edges;
  for (int d = 1; d <= 10; ++d) edges.push_back(E(d - 1, d, "dep"));
  std::vector<Edge> fewer(edges.begin(), edges.end() - 1);
  EvalResult r = Elas({Graph(10, edges)}, {Graph(10, fewer)});
  CHECK(r.precision() == 1.0);
  CHECK(r.recall() == doctest::Approx(0.9));
  CHECK(r.f1() == doctest::Approx(18.0 / 19.0));
}

TEST_CASE("EULAS truncates subtypes; ELAS does not") {
  EnhancedGraph gold = Graph(2, {E(0, 1, "root"), E(1, 2, "nmod:in")});
  EnhancedGraph sys = Graph(2, {E(0, 1, "root"), E(1, 2, "nmod:on")});
  CHECK(Elas({gold}, {sys}).matched == 1);
  CHECK(Eulas({gold}, {sys}).matched == 2);
  CHECK(UniversalLabel("nmod:in>obj:x") == "nmod>obj");
  CHECK(UniversalLabel("root") == "root");
}

TEST_CASE("graphs are collapsed and split before matching") {
  EnhancedGraph with_empty;
  with_empty.n = 2;
  with_empty.empty_nodes = {NodeId{1, 1}};
  with_empty.edges = {E(0, 1, "root"), {SurfaceNode(1), NodeId{1, 1}, "conj"},
                      {NodeId{1, 1}, SurfaceNode(2), "obj"}};
  EnhancedGraph collapsed = Graph(2, {E(0, 1, "root"), E(1, 2, "conj>obj")});
  CHECK(Elas({with_empty}, {collapsed}).f1() == 1.0);
  EnhancedGraph merged = Graph(2, {E(0, 1, "root"), E(1, 2, "a+b")});
  EnhancedGraph split = Graph(2, {E(0, 1, "root"), E(1, 2, "a"), E(1, 2, "b")});
  CHECK(Elas({merged}, {split}).f1() == 1.0);
}

TEST_CASE("matches a set-intersection oracle on random perturbations") {
  std::mt19937_64 rng(51);
  const char* labels[] = {"nsubj", "obj", "obl:in", "obl:on", "conj:and"};
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<EnhancedGraph> gold, sys;
    long matched = 0, gold_count = 0, sys_count = 0, umatched = 0;
    const int sentences = std::uniform_int_distribution<int>(1, 4)(rng);
    for (int s = 0; s < sentences; ++s) {
      const int n = std::uniform_int_distribution<int>(1, 6)(rng);
      std::vector<Edge> g, p;
      for (int k = 0; k < 2 * n; ++k) {
        int h = std::uniform_int_distribution<int>(0, n)(rng);
        int d = std::uniform_int_distribution<int>(1, n)(rng);
        if (h == d) continue;
        Edge e = E(h, d, labels[std::uniform_int_distribution<int>(0, 4)(rng)]);
        g.push_back(e);
        if (std::bernoulli_distribution(0.7)(rng)) p.push_back(e);
        if (std::bernoulli_distribution(0.3)(rng)) {
          p.push_back(E(h, d, labels[std::uniform_int_distribution<int>(0, 4)(rng)]));
        }
      }
      gold.push_back(Graph(n, g));
      sys.push_back(Graph(n, p));
      std::set<Edge> gs(gold.back().edges.begin(), gold.back().edges.end());
      std::set<Edge> ps(sys.back().edges.begin(), sys.back().edges.end());
      std::vector<Edge> common;
      std::set_intersection(gs.begin(), gs.end(), ps.begin(), ps.end(), std::back_inserter(common));
      matched += common.size();
      gold_count += gs.size();
      sys_count += ps.size();
      auto universal = [](const std::set<Edge>& edges) {
        std::multiset<std::tuple<NodeId, NodeId, std::string>> out;
        for (const Edge& e : edges) out.emplace(e.head, e.dep, UniversalLabel(e.label));
        return out;
      };
      auto gu = universal(gs), pu = universal(ps);
      std::vector<std::tuple<NodeId, NodeId, std::string>> ucommon;
      std::set_intersection(gu.begin(), gu.end(), pu.begin(), pu.end(), std::back_inserter(ucommon));
      umatched += ucommon.size();
    }
    EvalResult r = Elas(gold, sys);
    REQUIRE(r.matched == matched);
    REQUIRE(r.gold_edges == gold_count);
    REQUIRE(r.system_edges == sys_count);
    EvalResult u = Eulas(gold, sys);
    REQUIRE(u.matched == umatched);
    REQUIRE(u.gold_edges == r.gold_edges);
    REQUIRE(u.f1() >= r.f1() - 1e-12);
  }
}

TEST_CASE("mismatched corpora are errors naming the sentence") {
  EnhancedGraph a = Graph(2, {E(0, 1, "root")});
  EnhancedGraph b = Graph(3, {E(0, 1, "root")});
  CHECK_THROWS_AS(Elas({a}, {a, a}), EvalError);
  try {
    Elas({a}, {b}, {"s-7"});
    FAIL("expected an error");
  } catch (const EvalError& e) {
    CHECK(std::string(e.what()).find("s-7") != std::string::npos);
  }
}

TEST_CASE("macro average") {
  CHECK(MacroAverage({0.8, 0.9}) == doctest::Approx(0.85));
  CHECK(MacroAverage({0.7}) == 0.7);
  CHECK_THROWS(MacroAverage({}));
  const std::vector<double> tgif{81.23, 93.63, 92.24, 91.78, 88.19, 88.38,
                                 91.75, 91.63, 93.31, 90.23, 86.06, 91.46,
                                 94.01, 94.96, 89.90, 65.58, 92.78};
  CHECK(tgif.size() == 17);
  CHECK(std::abs(MacroAverage(tgif) - 89.24) <= 0.005);
}

TEST_CASE("metric lines") {
  EvalResult r;
  r.gold_edges = 4;
  r.system_edges = 5;
  r.matched = 3;
  std::ostringstream out;
  WriteMetric(out, "ELAS", r);
  CHECK(out.str() == "ELAS_P=60.00\nELAS_R=75.00\nELAS_F1=66.67\n");
}

}  // namespace
}  // namespace eud
