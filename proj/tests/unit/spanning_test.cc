#include "eud/spanning.h"

#include <map>
#include <numeric>
#include <random>

#include "doctest.h"
#include "eud/conllu.h"
#include "support/oracles.h"
#include "support/toy_grammar.h"

namespace eud {
namespace {

const char kFigure1[] =
    "1\tthe\tthe\tDET\tDT\t_\t2\tdet\t2:det\t_\n"
    "2\tbook\tbook\tNOUN\tNN\t_\t0\troot\t0:root|5:obj\t_\n"
    "3\tthat\tthat\tPRON\tWDT\t_\t5\tobj\t2:ref\t_\n"
    "4\tI\tI\tPRON\tPRP\t_\t5\tnsubj\t5:nsubj\t_\n"
    "5\tread\tread\tVERB\tVBD\t_\t2\tacl:relcl\t2:acl:relcl\t_\n\n";

Edge E(int h, int d, std::string label) {
  return {SurfaceNode(h), SurfaceNode(d), std::move(label)};
}

CollapsedGraph Collapsed(const Sentence& s) {
  return CollapsedGraph{s.size(), s.enhanced.edges};
}

// Sentence with the given basic heads (index 0 unused) and no enhanced edges.
Sentence WithBasicHeads(const std::vector<int>& heads) {
  Sentence s;
  for (size_t j = 1; j < heads.size(); ++j) {
    Word w;
    w.id = SurfaceNode(static_cast<int>(j));
    w.form = "w" + std::to_string(j);
    w.basic_head = SurfaceNode(heads[j]);
    w.basic_deprel = heads[j] == 0 ? "root" : "dep";
    s.words.push_back(w);
  }
  s.enhanced.n = static_cast<int>(heads.size()) - 1;
  return s;
}

// The three rules, restated with an explicit candidate list per word.
std::vector<int> RuleOracle(const Sentence& s, const CollapsedGraph& g,
                            const std::vector<int>& depth) {
  std::vector<int> heads(g.n + 1, -1);
  for (int j = 1; j <= g.n; ++j) {
    std::vector<std::pair<int, std::string>> cands;
    for (const Edge& e : g.edges) {
      if (e.dep.major == j) cands.emplace_back(e.head.major, e.label);
    }
    std::sort(cands.begin(), cands.end());
    if (cands.size() == 1) {
      heads[j] = cands[0].first;
      continue;
    }
    const int basic = s.word(j).basic_head->major;
    bool found = false;
    for (const auto& c : cands) {
      if (c.first == basic) {
        heads[j] = basic;
        found = true;
        break;
      }
    }
    if (found) continue;
    int best = -1;
    for (const auto& c : cands) {
      if (best < 0 || depth[c.first] < depth[best]) best = c.first;
    }
    heads[j] = best;
  }
  return heads;
}

TEST_CASE("basic depth on figure 1, a single word and a chain") {
  Sentence s = ParseConllu(kFigure1)[0];
  CHECK(ComputeBasicDepth(s) == std::vector<int>{0, 2, 1, 3, 3, 2});
  CHECK(ComputeBasicDepth(WithBasicHeads({-1, 0})) == std::vector<int>{0, 1});
  CHECK(ComputeBasicDepth(WithBasicHeads({-1, 2, 3, 4, 0})) == std::vector<int>{0, 4, 3, 2, 1});
}

TEST_CASE("basic depth rejects cycles") {
  CHECK_THROWS_AS(ComputeBasicDepth(WithBasicHeads({-1, 2, 1})), ExtractionError);
}

TEST_CASE("figure 1 extraction and residual edge") {
  Sentence s = ParseConllu(kFigure1)[0];
  CollapsedGraph g = Collapsed(s);
  SpanningTree t = ExtractSpanningTree(s, g);
  CHECK(t.heads == std::vector<int>{-1, 2, 0, 2, 5, 2});
  CHECK(t.labels[3] == "ref");
  CHECK(t.labels[2] == "root");
  CHECK(ResidualEdges(g, t) == std::vector<Edge>{E(5, 2, "obj")});
}

TEST_CASE("single-headed graph extracts itself") {
  Sentence s = WithBasicHeads({-1, 2, 0, 2});
  CollapsedGraph g{3, {E(2, 1, "a"), E(0, 2, "root"), E(2, 3, "b")}};
  g.Normalize();
  SpanningTree t = ExtractSpanningTree(s, g);
  CHECK(testing::EdgeTriples(t.Edges()) == testing::EdgeTriples(g.edges));
  CHECK(ResidualEdges(g, t).empty());
}

TEST_CASE("rule 2 ignores the label and breaks ties by label") {
  Sentence s = WithBasicHeads({-1, 0, 1});
  CollapsedGraph g{2, {E(0, 1, "root"), E(1, 2, "obj"), E(1, 2, "nsubj"), E(0, 2, "x")}};
  SpanningTree t = ExtractSpanningTree(s, g);
  CHECK(t.heads[2] == 1);
  CHECK(t.labels[2] == "nsubj");
}

TEST_CASE("rule 3 picks the shallowest head") {
  // Basic chain 0 -> 1 -> 2 -> 3 -> 4; word 5 hangs off 4 in the basic tree
  // but its enhanced heads are 3 (depth 3) and 1 (depth 1).
  Sentence s = WithBasicHeads({-1, 0, 1, 2, 3, 4});
  CollapsedGraph g{5, {E(0, 1, "root"), E(1, 2, "a"), E(2, 3, "a"), E(3, 4, "a"),
                       E(3, 5, "x"), E(1, 5, "y")}};
  SpanningTree t = ExtractSpanningTree(s, g);
  CHECK(t.heads[5] == 1);
  CHECK(t.labels[5] == "y");
}

TEST_CASE("extraction errors") {
  Sentence s = WithBasicHeads({-1, 0, 1});
  CHECK_THROWS_AS(ExtractSpanningTree(s, CollapsedGraph{2, {E(0, 1, "root")}}), ExtractionError);
  CHECK_THROWS_AS(ExtractSpanningTree(s, CollapsedGraph{2, {E(2, 1, "a"), E(1, 2, "b")}}),
                  ExtractionError);
}

TEST_CASE("IsTree") {
  CHECK(IsTree({-1, 0}));
  CHECK(IsTree({-1, 2, 0, 2}));
  CHECK_FALSE(IsTree({-1, 2, 1}));
  CHECK_FALSE(IsTree({-1, 1}));
  CHECK_FALSE(IsTree({-1, 5}));
}

TEST_CASE("random graphs: rules match the oracle, trees verified, partition holds") {
  std::mt19937_64 rng(21);
  int successes = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 5)(rng);
    // Random basic tree: attach each word to a random earlier-numbered node
    // of a random permutation, so the basic tree is valid.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 1);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> basic(n + 1, 0);
    basic[0] = -1;
    for (int k = 0; k < n; ++k) {
      basic[order[k]] = k == 0 ? 0 : order[std::uniform_int_distribution<int>(0, k - 1)(rng)];
    }
    Sentence s = WithBasicHeads(basic);
    CollapsedGraph g{n, {}};
    for (int j = 1; j <= n; ++j) g.edges.push_back(E(basic[j], j, "b"));
    const int extra = std::uniform_int_distribution<int>(0, 2 * n)(rng);
    for (int k = 0; k < extra; ++k) {
      int h = std::uniform_int_distribution<int>(0, n)(rng);
      int d = std::uniform_int_distribution<int>(1, n)(rng);
      if (h != d) g.edges.push_back(E(h, d, std::string(1, "xyz"[k % 3])));
    }
    // Sometimes drop the basic edge so rule 3 is exercised.
    if (std::bernoulli_distribution(0.5)(rng)) {
      int j = std::uniform_int_distribution<int>(1, n)(rng);
      std::erase(g.edges, E(basic[j], j, "b"));
    }
    g.Normalize();
    std::vector<int> expected;
    bool has_heads = true;
    for (int j = 1; j <= n; ++j) has_heads &= !g.IncomingEdges(j).empty();
    if (has_heads) expected = RuleOracle(s, g, ComputeBasicDepth(s));
    try {
      SpanningTree t = ExtractSpanningTree(s, g);
      ++successes;
      REQUIRE(t.heads == expected);
      REQUIRE(testing::HeadsFormTree(t.heads));
      std::vector<Edge> residual = ResidualEdges(g, t);
      std::vector<Edge> all = t.Edges();
      all.insert(all.end(), residual.begin(), residual.end());
      REQUIRE(testing::EdgeTriples(all) == testing::EdgeTriples(g.edges));
    } catch (const ExtractionError&) {
      REQUIRE((!has_heads || !testing::HeadsFormTree(expected)));
    }
  }
  CHECK(successes > 1000);
}

TEST_CASE("extraction succeeds on every gold sample and toy sentence") {
  std::vector<Sentence> all = ReadConlluFile(EUD_TEST_DATA "/en_sample.conllu");
  std::vector<Sentence> toy = testing::GenerateToyCorpus(300, {}, 5);
  all.insert(all.end(), toy.begin(), toy.end());
  for (const Sentence& s : all) {
    CollapsedGraph g = MergeParallelEdges(CollapseEmptyNodes(s.enhanced).graph);
    SpanningTree t = ExtractSpanningTree(s, g);
    CHECK(testing::HeadsFormTree(t.heads));
  }
}

}  // namespace
}  // namespace eud
