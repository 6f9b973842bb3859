#include "eud/baseline.h"

#include <random>

#include "doctest.h"
#include "eud/graph.h"
#include "support/oracles.h"

namespace eud {
namespace {

Edge E(int h, int d, std::string label) {
  return {SurfaceNode(h), SurfaceNode(d), std::move(label)};
}

SentenceScores RandomSentenceScores(int n, std::mt19937_64& rng) {
  SentenceScores s;
  s.tree = testing::RandomScores(n, rng);
  s.graph = testing::RandomScores(n, rng);
  s.rel = {testing::RandomScores(n, rng), testing::RandomScores(n, rng)};
  return s;
}

const std::vector<std::string> kLabels{"x", "y"};

TEST_CASE("connected input is unchanged") {
  std::mt19937_64 rng(41);
  SentenceScores s = RandomSentenceScores(3, rng);
  CollapsedGraph g{3, {E(0, 1, "x"), E(1, 2, "y"), E(1, 3, "x")}};
  RepairResult r = FixConnectivity(g, s, kLabels);
  CHECK(r.added_edges == 0);
  CHECK(r.graph.edges == g.edges);
}

TEST_CASE("two components: the argmax crossing edge is added") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 500; ++trial) {
    SentenceScores s = RandomSentenceScores(4, rng);
    // {1, 2} reachable; {3, 4} strongly connected but cut off.
    CollapsedGraph g{4, {E(0, 1, "x"), E(1, 2, "x"), E(3, 4, "x"), E(4, 3, "y")}};
    RepairResult r = FixConnectivity(g, s, kLabels);
    REQUIRE(r.added_edges == 1);
    double best = -1e300;
    std::pair<int, int> arg;
    for (int h : {0, 1, 2}) {
      for (int d : {3, 4}) {
        if (s.graph(h, d) > best) {
          best = s.graph(h, d);
          arg = {h, d};
        }
      }
    }
    std::vector<Edge> added;
    for (const Edge& e : r.graph.edges) {
      if (std::find(g.edges.begin(), g.edges.end(), e) == g.edges.end()) added.push_back(e);
    }
    REQUIRE(added.size() == 1);
    REQUIRE(added[0].head.major == arg.first);
    REQUIRE(added[0].dep.major == arg.second);
    const int label = s.rel[1](arg.first, arg.second) > s.rel[0](arg.first, arg.second) ? 1 : 0;
    REQUIRE(added[0].label == kLabels[label]);
  }
}

TEST_CASE("isolated nodes with uniform scores repair in (head, dep) order") {
  SentenceScores s;
  s.tree = ArcScores(3);
  s.graph = ArcScores(3);
  s.rel = {ArcScores(3), ArcScores(3)};
  RepairResult r = FixConnectivity(CollapsedGraph{3, {}}, s, kLabels);
  CHECK(r.added_edges == 3);
  CHECK(r.graph.edges == std::vector<Edge>{E(0, 1, "x"), E(0, 2, "x"), E(0, 3, "x")});
}

TEST_CASE("greedy repair can spend more edges than there are components") {
  // Chain 3 -> 4 cut off; the best crossing edge enters 4, so 3 still needs one.
  SentenceScores s;
  s.tree = ArcScores(4);
  s.graph = ArcScores(4);
  s.rel = {ArcScores(4), ArcScores(4)};
  for (int h = 0; h <= 4; ++h) {
    for (int d = 1; d <= 4; ++d) s.graph(h, d) = -5.0;
  }
  s.graph(1, 4) = 3.0;
  s.graph(2, 3) = 1.0;
  CollapsedGraph g{4, {E(0, 1, "x"), E(1, 2, "x"), E(3, 4, "x")}};
  RepairResult r = FixConnectivity(g, s, kLabels);
  CHECK(r.added_edges == 2);
  CHECK(CheckConnectivity(r.graph).connected);
}

TEST_CASE("repair always connects and adds at most one edge per unreachable word") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 8)(rng);
    SentenceScores s = RandomSentenceScores(n, rng);
    CollapsedGraph g{n, {}};
    for (int k = 0; k < n; ++k) {
      int h = std::uniform_int_distribution<int>(0, n)(rng);
      int d = std::uniform_int_distribution<int>(1, n)(rng);
      if (h != d) g.edges.push_back(E(h, d, "x"));
    }
    g.Normalize();
    const size_t unreachable = CheckConnectivity(g).unreachable.size();
    RepairResult r = FixConnectivity(g, s, kLabels);
    REQUIRE(CheckConnectivity(r.graph).connected);
    REQUIRE(static_cast<size_t>(r.added_edges) <= unreachable);
    REQUIRE(r.graph.edges.size() == g.edges.size() + r.added_edges);
  }
}

TEST_CASE("mst repair adds arborescence edges only") {
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 8)(rng);
    SentenceScores s = RandomSentenceScores(n, rng);
    CollapsedGraph g{n, {}};
    for (int k = 0; k < n; ++k) {
      int h = std::uniform_int_distribution<int>(0, n)(rng);
      int d = std::uniform_int_distribution<int>(1, n)(rng);
      if (h != d) g.edges.push_back(E(h, d, "x"));
    }
    g.Normalize();
    const Connectivity before = CheckConnectivity(g);
    const bool single_root = trial % 2;
    RepairResult r = FixConnectivityMst(g, s, kLabels, single_root);
    REQUIRE(CheckConnectivity(r.graph).connected);
    REQUIRE(static_cast<size_t>(r.added_edges) <= before.unreachable.size());
    REQUIRE(r.graph.edges.size() == g.edges.size() + r.added_edges);
    const SpanningTree mst = DecodeMst(s.graph, single_root);
    std::multiset<testing::Triple> old_edges = testing::EdgeTriples(g.edges);
    for (const Edge& e : r.graph.edges) {
      auto it = old_edges.find({e.head.ToString(), e.dep.ToString(), e.label});
      if (it != old_edges.end()) {
        old_edges.erase(it);
        continue;
      }
      REQUIRE(mst.heads[e.dep.major] == e.head.major);
      REQUIRE(before.unreachable.count(e.dep));
    }
  }
}

TEST_CASE("mst repair of an empty graph is the arborescence") {
  std::mt19937_64 rng(46);
  SentenceScores s = RandomSentenceScores(5, rng);
  RepairResult r = FixConnectivityMst(CollapsedGraph{5, {}}, s, kLabels);
  const SpanningTree mst = DecodeMst(s.graph);
  CHECK(r.added_edges == 5);
  for (const Edge& e : r.graph.edges) CHECK(mst.heads[e.dep.major] == e.head.major);
}

TEST_CASE("graph-only decoding can disconnect; the fix reconnects") {
  ModelConfig c;
  c.embedding_dim = 8;
  c.arc_hidden = 4;
  c.rel_hidden = 4;
  c.unk_buckets = 2;
  ScoreModel m(c, ParserMode::kGraphFix, {"a"}, {"x"});
  std::mt19937_64 rng(44);
  m.InitializeRandom(rng);
  m.params().graph.u.setZero();
  m.params().graph.bias_head.setZero();
  m.params().graph.bias_mod.setZero();
  m.params().graph.bias = -1.0;
  std::vector<std::string> forms{"a", "a", "a"};
  CollapsedGraph raw = GraphOnlyDecode(m, forms);
  CHECK(raw.edges.empty());
  CHECK_FALSE(CheckConnectivity(raw).connected);
  CollapsedGraph fixed = ParseGraphFix(m, forms);
  CHECK(CheckConnectivity(fixed).connected);
  CHECK(fixed.edges.size() == 3);
  DecodeOptions mst;
  mst.repair = RepairMethod::kMst;
  CollapsedGraph fixed_mst = ParseGraphFix(m, forms, mst);
  CHECK(CheckConnectivity(fixed_mst).connected);
  CHECK(fixed_mst.edges.size() == 3);
}

}  // namespace
}  // namespace eud
