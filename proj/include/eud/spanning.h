// Spanning-tree extraction from gold enhanced graphs. The extracted tree is
// the tree parser's target; the remaining edges supervise the graph parser.

#ifndef EUD_SPANNING_H_
#define EUD_SPANNING_H_

#include <stdexcept>
#include <string>
#include <vector>

#include "eud/conllu.h"
#include "eud/graph.h"

namespace eud {

// heads[j] / labels[j] describe the edge into word j (1..n); index 0 is
// unused and holds -1 / "".
struct SpanningTree {
  int n = 0;
  std::vector<int> heads;
  std::vector<std::string> labels;

  static SpanningTree Unlabeled(std::vector<int> heads);
  std::vector<Edge> Edges() const;

  friend bool operator==(const SpanningTree&, const SpanningTree&) = default;
};

class ExtractionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// depth[i] is the number of basic edges from the root to word i; depth[0]=0.
std::vector<int> ComputeBasicDepth(const Sentence& sentence);

// True iff heads (index 0 unused) give every word one head in 0..n, contain
// no cycle and reach every word from the root.
bool IsTree(const std::vector<int>& heads);

// Head assignment by, in order: the unique incoming edge; the incoming edge
// whose head is the basic head; the incoming edge whose head is shallowest in
// the basic tree. Throws ExtractionError if a word has no incoming edge or the
// result is not a tree.
SpanningTree ExtractSpanningTree(const Sentence& sentence,
                                 const CollapsedGraph& graph);

// graph.edges minus the tree's edges.
std::vector<Edge> ResidualEdges(const CollapsedGraph& graph,
                                const SpanningTree& tree);

}  // namespace eud

#endif  // EUD_SPANNING_H_
