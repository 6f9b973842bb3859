// Graph-only decoding with connectivity repair, the comparison system for the
// tree-graph parser.

#ifndef EUD_BASELINE_H_
#define EUD_BASELINE_H_

#include <span>
#include <string>

#include "eud/decode.h"
#include "eud/graph.h"
#include "eud/scorer.h"

namespace eud {

// Thresholded graph edges over all pairs, labeled; may be disconnected.
CollapsedGraph GraphOnlyDecode(const ScoreModel& model,
                               const SentenceScores& scores);
CollapsedGraph GraphOnlyDecode(const ScoreModel& model,
                               std::span<const std::string> forms);

struct RepairResult {
  CollapsedGraph graph;
  int added_edges = 0;
};

// Greedy repair: while some word is unreachable from the root, add the
// highest-scoring graph edge from a reachable node to an unreachable one
// (ties to the smaller (head, dep)), labeled by the relation scorer.
RepairResult FixConnectivity(const CollapsedGraph& graph,
                             const SentenceScores& scores,
                             const std::vector<std::string>& label_vocab);

// MST repair: decode the maximum spanning arborescence over the graph
// scores, then, while some word is unreachable, add the best-scoring
// arborescence edge whose head is reachable (ties to the smaller
// (head, dep)). Adds at most one edge per initially unreachable word.
RepairResult FixConnectivityMst(const CollapsedGraph& graph,
                                const SentenceScores& scores,
                                const std::vector<std::string>& label_vocab,
                                bool single_root = false);

CollapsedGraph ParseGraphFix(const ScoreModel& model,
                             std::span<const std::string> forms,
                             const DecodeOptions& options = {});

}  // namespace eud

#endif  // EUD_BASELINE_H_
