#include "eud/decode.h"

#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "eud/baseline.h"

namespace eud {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Maximum arborescence rooted at node 0 of a dense weight matrix
// (weights(h, d); kNegInf marks a missing edge). Returns head per node,
// with -1 at the root.
std::vector<int> ChuLiuEdmonds(const MatrixXd& weights) {
  const int m = static_cast<int>(weights.rows());
  std::vector<int> best(m, -1);
  for (int v = 1; v < m; ++v) {
    double top = kNegInf;
    for (int u = 0; u < m; ++u) {
      if (u == v) continue;
      if (best[v] < 0 || weights(u, v) > top) {
        best[v] = u;
        top = weights(u, v);
      }
    }
  }

  // Find one cycle among the greedy choices.
  std::vector<int> cycle;
  std::vector<int> mark(m, -1);
  for (int start = 1; start < m && cycle.empty(); ++start) {
    int v = start;
    while (v > 0 && mark[v] < 0) {
      mark[v] = start;
      v = best[v];
    }
    if (v > 0 && mark[v] == start) {
      int u = v;
      do {
        cycle.push_back(u);
        u = best[u];
      } while (u != v);
    }
  }
  if (cycle.empty()) return best;

  std::vector<bool> in_cycle(m, false);
  for (int v : cycle) in_cycle[v] = true;
  // Contracted node ids: non-cycle nodes keep their relative order, the
  // cycle becomes the last node.
  std::vector<int> to_new(m, -1);
  std::vector<int> to_old;
  for (int v = 0; v < m; ++v) {
    if (!in_cycle[v]) {
      to_new[v] = static_cast<int>(to_old.size());
      to_old.push_back(v);
    }
  }
  const int c = static_cast<int>(to_old.size());
  const int m2 = c + 1;
  MatrixXd contracted = MatrixXd::Constant(m2, m2, kNegInf);
  std::vector<int> enter_at(m2, -1);  // cycle node entered from outside node
  std::vector<int> leave_from(m2, -1);  // cycle node leading to outside node
  for (int a = 0; a < c; ++a) {
    const int u = to_old[a];
    for (int b = 0; b < c; ++b) {
      if (a != b) contracted(a, b) = weights(u, to_old[b]);
    }
    double into = kNegInf;
    for (int v : cycle) {
      const double w = weights(u, v) - weights(best[v], v);
      if (enter_at[a] < 0 || w > into || (w == into && v < enter_at[a])) {
        into = w;
        enter_at[a] = v;
      }
    }
    contracted(a, c) = into;
    double out = kNegInf;
    for (int v : cycle) {
      const double w = weights(v, u);
      if (leave_from[a] < 0 || w > out || (w == out && v < leave_from[a])) {
        out = w;
        leave_from[a] = v;
      }
    }
    contracted(c, a) = out;
  }

  std::vector<int> sub = ChuLiuEdmonds(contracted);
  std::vector<int> heads(m, -1);
  for (int a = 1; a < c; ++a) {
    const int v = to_old[a];
    heads[v] = sub[a] == c ? leave_from[a] : to_old[sub[a]];
  }
  for (int v : cycle) heads[v] = best[v];
  const int entry_head = sub[c];
  heads[enter_at[entry_head]] = to_old[entry_head];
  return heads;
}

double TreeScore(const MatrixXd& weights, const std::vector<int>& heads) {
  double total = 0.0;
  for (size_t v = 1; v < heads.size(); ++v) total += weights(heads[v], static_cast<Eigen::Index>(v));
  return total;
}

}  // namespace

SpanningTree DecodeMst(const ArcScores& scores, bool single_root) {
  const int n = scores.n();
  if (n < 1) throw std::invalid_argument("cannot decode an empty sentence");
  if (!scores.matrix().allFinite()) {
    throw std::invalid_argument("non-finite arc score");
  }
  MatrixXd weights = MatrixXd::Constant(n + 1, n + 1, kNegInf);
  weights.rightCols(n) = scores.matrix();
  for (int v = 0; v <= n; ++v) weights(v, v) = kNegInf;

  std::vector<int> heads;
  if (!single_root) {
    heads = ChuLiuEdmonds(weights);
  } else {
    double best_total = kNegInf;
    for (int r = 1; r <= n; ++r) {
      MatrixXd w = weights;
      for (int v = 1; v <= n; ++v) {
        if (v != r) w(0, v) = kNegInf;
      }
      std::vector<int> candidate = ChuLiuEdmonds(w);
      const double total = TreeScore(weights, candidate);
      if (heads.empty() || total > best_total) {
        best_total = total;
        heads = std::move(candidate);
      }
    }
  }
  if (!IsTree(heads)) throw std::logic_error("arborescence decoder produced a non-tree");
  return SpanningTree::Unlabeled(std::move(heads));
}

std::vector<std::pair<int, int>> DecodeEdges(const ArcScores& scores) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i <= scores.n(); ++i) {
    for (int j = 1; j <= scores.n(); ++j) {
      if (i != j && scores(i, j) >= 0.0) edges.emplace_back(i, j);
    }
  }
  return edges;
}

int ArgmaxLabel(const VectorXd& scores) {
  int best = 0;
  for (int r = 1; r < scores.size(); ++r) {
    if (scores(r) > scores(best)) best = r;
  }
  return best;
}

std::vector<LabeledPair> LabelEdges(const SentenceScores& scores,
                                    std::span<const std::pair<int, int>> edges) {
  std::vector<LabeledPair> labeled;
  for (auto [i, j] : edges) {
    if (i < 0 || i > scores.n() || j < 1 || j > scores.n()) {
      throw std::out_of_range("edge outside the sentence");
    }
    labeled.push_back({i, j, ArgmaxLabel(scores.RelVector(i, j))});
  }
  return labeled;
}

Assembly Assemble(const SpanningTree& tree, const std::vector<Edge>& extra) {
  Assembly result;
  result.graph.n = tree.n;
  result.graph.edges = tree.Edges();
  std::set<std::pair<int, int>> pairs;
  for (int j = 1; j <= tree.n; ++j) pairs.emplace(tree.heads[j], j);
  for (const Edge& e : extra) {
    if (!pairs.emplace(e.head.major, e.dep.major).second) {
      ++result.collisions;
      continue;
    }
    result.graph.edges.push_back(e);
  }
  result.graph.Normalize();
  return result;
}

ParseResult ParseSentence(const ScoreModel& model,
                          std::span<const std::string> forms,
                          const DecodeOptions& options) {
  SentenceScores scores = model.Score(forms);
  const std::vector<std::string>& vocab = model.label_vocab();
  SpanningTree tree = DecodeMst(scores.tree, options.single_root);
  std::vector<std::pair<int, int>> tree_pairs;
  for (int j = 1; j <= tree.n; ++j) tree_pairs.emplace_back(tree.heads[j], j);
  for (const LabeledPair& p : LabelEdges(scores, tree_pairs)) {
    tree.labels[p.dep] = vocab[p.label];
  }
  std::set<std::pair<int, int>> in_tree(tree_pairs.begin(), tree_pairs.end());
  std::vector<std::pair<int, int>> extra_pairs = DecodeEdges(scores.graph);
  std::vector<Edge> extra;
  for (const LabeledPair& p : LabelEdges(scores, extra_pairs)) {
    extra.push_back({SurfaceNode(p.head), SurfaceNode(p.dep), vocab[p.label]});
  }
  Assembly assembly = Assemble(tree, extra);
  return {std::move(assembly.graph), std::move(tree), assembly.collisions};
}

ParseResult ParseWithModelMode(const ScoreModel& model,
                               std::span<const std::string> forms,
                               const DecodeOptions& options) {
  if (model.mode() == ParserMode::kTreeGraph) {
    return ParseSentence(model, forms, options);
  }
  ParseResult result;
  result.graph = ParseGraphFix(model, forms, options);
  return result;
}

}  // namespace eud
