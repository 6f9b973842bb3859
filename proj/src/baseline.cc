#include "eud/baseline.h"

#include <vector>

#include "eud/decode.h"

namespace eud {

CollapsedGraph GraphOnlyDecode(const ScoreModel& model,
                               const SentenceScores& scores) {
  CollapsedGraph graph;
  graph.n = scores.n();
  std::vector<std::pair<int, int>> pairs = DecodeEdges(scores.graph);
  for (const LabeledPair& p : LabelEdges(scores, pairs)) {
    graph.edges.push_back(
        {SurfaceNode(p.head), SurfaceNode(p.dep), model.label_vocab()[p.label]});
  }
  graph.Normalize();
  return graph;
}

CollapsedGraph GraphOnlyDecode(const ScoreModel& model,
                               std::span<const std::string> forms) {
  return GraphOnlyDecode(model, model.Score(forms));
}

RepairResult FixConnectivity(const CollapsedGraph& graph,
                             const SentenceScores& scores,
                             const std::vector<std::string>& label_vocab) {
  RepairResult result{graph, 0};
  const int n = graph.n;
  while (true) {
    Connectivity c = CheckConnectivity(result.graph);
    if (c.connected) break;
    std::vector<bool> reachable(n + 1, true);
    for (NodeId v : c.unreachable) reachable[v.major] = false;
    int best_head = -1;
    int best_dep = -1;
    for (int i = 0; i <= n; ++i) {
      if (!reachable[i]) continue;
      for (int j = 1; j <= n; ++j) {
        if (reachable[j]) continue;
        if (best_head < 0 || scores.graph(i, j) > scores.graph(best_head, best_dep)) {
          best_head = i;
          best_dep = j;
        }
      }
    }
    const int label = ArgmaxLabel(scores.RelVector(best_head, best_dep));
    result.graph.edges.push_back(
        {SurfaceNode(best_head), SurfaceNode(best_dep), label_vocab[label]});
    ++result.added_edges;
  }
  result.graph.Normalize();
  return result;
}

RepairResult FixConnectivityMst(const CollapsedGraph& graph,
                                const SentenceScores& scores,
                                const std::vector<std::string>& label_vocab,
                                bool single_root) {
  RepairResult result{graph, 0};
  if (CheckConnectivity(graph).connected) return result;
  const SpanningTree tree = DecodeMst(scores.graph, single_root);
  while (true) {
    Connectivity c = CheckConnectivity(result.graph);
    if (c.connected) break;
    int best_dep = -1;
    for (NodeId v : c.unreachable) {
      const int j = v.major;
      if (c.unreachable.count(SurfaceNode(tree.heads[j]))) continue;
      if (best_dep < 0 ||
          scores.graph(tree.heads[j], j) > scores.graph(tree.heads[best_dep], best_dep) ||
          (scores.graph(tree.heads[j], j) == scores.graph(tree.heads[best_dep], best_dep) &&
           std::make_pair(tree.heads[j], j) < std::make_pair(tree.heads[best_dep], best_dep))) {
        best_dep = j;
      }
    }
    const int head = tree.heads[best_dep];
    const int label = ArgmaxLabel(scores.RelVector(head, best_dep));
    result.graph.edges.push_back({SurfaceNode(head), SurfaceNode(best_dep), label_vocab[label]});
    ++result.added_edges;
  }
  result.graph.Normalize();
  return result;
}

CollapsedGraph ParseGraphFix(const ScoreModel& model,
                             std::span<const std::string> forms,
                             const DecodeOptions& options) {
  SentenceScores scores = model.Score(forms);
  CollapsedGraph graph = GraphOnlyDecode(model, scores);
  if (options.repair == RepairMethod::kMst) {
    return FixConnectivityMst(graph, scores, model.label_vocab(), options.single_root).graph;
  }
  return FixConnectivity(graph, scores, model.label_vocab()).graph;
}

}  // namespace eud
