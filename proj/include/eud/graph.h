// Enhanced dependency graph data model and the structural transforms applied
// before training and after decoding: empty-node path collapsing and
// multi-relation merging/splitting.

#ifndef EUD_GRAPH_H_
#define EUD_GRAPH_H_

#include <compare>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace eud {

// Word index plus empty-node sub-index. {0, 0} is the virtual root; surface
// words are {i, 0}; empty nodes "i.j" are {i, j} with j > 0.
struct NodeId {
  int major = 0;
  int minor = 0;

  constexpr bool is_root() const { return major == 0 && minor == 0; }
  constexpr bool is_empty() const { return minor > 0; }

  std::string ToString() const;

  friend constexpr auto operator<=>(const NodeId&, const NodeId&) = default;
};

constexpr NodeId SurfaceNode(int index) { return NodeId{index, 0}; }

struct Edge {
  NodeId head;
  NodeId dep;
  std::string label;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Labeled directed graph over surface words 1..n, the root 0 and any empty
// nodes. Multiple heads, cycles and multiple root children are allowed.
struct EnhancedGraph {
  int n = 0;
  std::vector<Edge> edges;
  std::vector<NodeId> empty_nodes;

  bool HasNode(NodeId id) const;
  // Sorts edges by (dep, head, label) and removes exact duplicates.
  void Normalize();

  friend bool operator==(const EnhancedGraph&, const EnhancedGraph&) = default;
};

// Graph over {0, 1..n} only. Labels may be composite ("conj>nsubj" for
// collapsed paths, "obj+xcomp" for merged parallel relations).
struct CollapsedGraph {
  int n = 0;
  std::vector<Edge> edges;

  // Sorted by (dep, head, label), duplicates removed.
  void Normalize();
  // Edges entering word `dep`, in head order.
  std::vector<Edge> IncomingEdges(int dep) const;
  std::vector<Edge> OutgoingEdges(int head) const;
  EnhancedGraph ToEnhanced() const;

  friend bool operator==(const CollapsedGraph&, const CollapsedGraph&) = default;
};

inline constexpr char kPathSeparator = '>';
inline constexpr char kMergeSeparator = '+';

struct Connectivity {
  bool connected = true;
  std::set<NodeId> unreachable;
};

// Forward reachability from the root along edge direction.
Connectivity CheckConnectivity(const EnhancedGraph& graph);
Connectivity CheckConnectivity(const CollapsedGraph& graph);

struct CollapseResult {
  CollapsedGraph graph;
  // Edges that touched empty nodes but never reached a surface word (paths
  // returning to their own head included).
  int dropped_edges = 0;
};

// Replaces every path head -> e1 -> ... -> ek -> dep whose intermediate nodes
// are all empty by one edge labeled "l1>l2>...>lk". Throws GraphError on a
// cycle among empty nodes.
CollapseResult CollapseEmptyNodes(const EnhancedGraph& graph);

// One edge per (head, dep); labels "+"-joined in lexicographic order.
CollapsedGraph MergeParallelEdges(const CollapsedGraph& graph);
CollapsedGraph SplitParallelEdges(const CollapsedGraph& graph);

// Splits `text` on `sep`, keeping empty pieces.
std::vector<std::string> SplitString(std::string_view text, char sep);
std::string JoinStrings(const std::vector<std::string>& parts, char sep);

}  // namespace eud

#endif  // EUD_GRAPH_H_
