// Inference for the tree-graph parser: maximum spanning arborescence over tree
// scores, thresholded extra edges, relation labeling, and assembly.

#ifndef EUD_DECODE_H_
#define EUD_DECODE_H_

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eud/graph.h"
#include "eud/scorer.h"
#include "eud/spanning.h"

namespace eud {

// Connectivity repair for graph-fix models.
enum class RepairMethod {
  kGreedy,  // best-scoring edge from the reachable part, one at a time
  kMst,     // edges of the maximum spanning arborescence over graph scores
};

struct DecodeOptions {
  // Restrict the root to a single child (ablation; off by default since
  // enhanced graphs may have several root children).
  bool single_root = false;
  RepairMethod repair = RepairMethod::kGreedy;
};

// Chu-Liu/Edmonds over heads 0..n and dependents 1..n. Equal-scoring
// candidates resolve to the smaller head index. Throws std::invalid_argument
// on non-finite scores.
SpanningTree DecodeMst(const ArcScores& scores, bool single_root = false);

// Every (i, j) with sigmoid(score) >= 0.5, i.e. score >= 0, and i != j.
std::vector<std::pair<int, int>> DecodeEdges(const ArcScores& scores);

struct LabeledPair {
  int head = 0;
  int dep = 0;
  int label = 0;
};

// argmax over labels per pair; ties go to the earlier vocabulary entry.
std::vector<LabeledPair> LabelEdges(const SentenceScores& scores,
                                    std::span<const std::pair<int, int>> edges);
int ArgmaxLabel(const VectorXd& scores);

struct Assembly {
  CollapsedGraph graph;
  int collisions = 0;  // extra edges dropped because the tree has that pair
};

// Tree edges plus extra edges; an extra edge on a tree pair is dropped.
Assembly Assemble(const SpanningTree& tree, const std::vector<Edge>& extra);

struct ParseResult {
  CollapsedGraph graph;  // de-lexicalized, possibly composite labels
  SpanningTree tree;     // labeled; empty in graph-fix mode
  int collisions = 0;
};

ParseResult ParseSentence(const ScoreModel& model,
                          std::span<const std::string> forms,
                          const DecodeOptions& options = {});

// Decodes with the strategy matching model.mode().
ParseResult ParseWithModelMode(const ScoreModel& model,
                               std::span<const std::string> forms,
                               const DecodeOptions& options = {});

}  // namespace eud

#endif  // EUD_DECODE_H_
