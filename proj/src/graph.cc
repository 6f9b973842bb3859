#include "eud/graph.h"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>

namespace eud {

std::string NodeId::ToString() const {
  if (minor == 0) return std::to_string(major);
  return std::to_string(major) + "." + std::to_string(minor);
}

namespace {

bool EdgeOrderByDep(const Edge& a, const Edge& b) {
  return std::tie(a.dep, a.head, a.label) < std::tie(b.dep, b.head, b.label);
}

void SortUnique(std::vector<Edge>& edges) {
  std::sort(edges.begin(), edges.end(), EdgeOrderByDep);
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

template <typename NodeSet>
Connectivity Reach(const std::vector<Edge>& edges, const NodeSet& nodes) {
  std::map<NodeId, std::vector<NodeId>> children;
  for (const Edge& e : edges) children[e.head].push_back(e.dep);
  std::set<NodeId> seen = {NodeId{}};
  std::queue<NodeId> frontier;
  frontier.push(NodeId{});
  while (!frontier.empty()) {
    NodeId u = frontier.front();
    frontier.pop();
    auto it = children.find(u);
    if (it == children.end()) continue;
    for (NodeId v : it->second) {
      if (seen.insert(v).second) frontier.push(v);
    }
  }
  Connectivity result;
  for (NodeId v : nodes) {
    if (!seen.count(v)) result.unreachable.insert(v);
  }
  result.connected = result.unreachable.empty();
  return result;
}

}  // namespace

bool EnhancedGraph::HasNode(NodeId id) const {
  if (id.minor == 0) return id.major >= 0 && id.major <= n;
  return std::find(empty_nodes.begin(), empty_nodes.end(), id) !=
         empty_nodes.end();
}

void EnhancedGraph::Normalize() {
  SortUnique(edges);
  std::sort(empty_nodes.begin(), empty_nodes.end());
}

void CollapsedGraph::Normalize() { SortUnique(edges); }

std::vector<Edge> CollapsedGraph::IncomingEdges(int dep) const {
  std::vector<Edge> out;
  for (const Edge& e : edges) {
    if (e.dep == SurfaceNode(dep)) out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Edge> CollapsedGraph::OutgoingEdges(int head) const {
  std::vector<Edge> out;
  for (const Edge& e : edges) {
    if (e.head == SurfaceNode(head)) out.push_back(e);
  }
  std::sort(out.begin(), out.end(), EdgeOrderByDep);
  return out;
}

EnhancedGraph CollapsedGraph::ToEnhanced() const {
  EnhancedGraph g;
  g.n = n;
  g.edges = edges;
  return g;
}

Connectivity CheckConnectivity(const EnhancedGraph& graph) {
  std::vector<NodeId> nodes;
  for (int i = 1; i <= graph.n; ++i) nodes.push_back(SurfaceNode(i));
  nodes.insert(nodes.end(), graph.empty_nodes.begin(), graph.empty_nodes.end());
  return Reach(graph.edges, nodes);
}

Connectivity CheckConnectivity(const CollapsedGraph& graph) {
  std::vector<NodeId> nodes;
  for (int i = 1; i <= graph.n; ++i) nodes.push_back(SurfaceNode(i));
  return Reach(graph.edges, nodes);
}

CollapseResult CollapseEmptyNodes(const EnhancedGraph& graph) {
  std::map<NodeId, std::vector<const Edge*>> out_of_empty;
  for (const Edge& e : graph.edges) {
    if (e.head.is_empty()) out_of_empty[e.head].push_back(&e);
  }

  CollapseResult result;
  result.graph.n = graph.n;
  std::set<const Edge*> used;
  std::vector<NodeId> path;

  // Walks from empty node `node`, emitting one edge per surface endpoint.
  std::function<void(NodeId, NodeId, std::string)> walk =
      [&](NodeId head, NodeId node, std::string label) {
        if (std::find(path.begin(), path.end(), node) != path.end()) {
          throw GraphError("cycle among empty nodes at " + node.ToString());
        }
        path.push_back(node);
        auto it = out_of_empty.find(node);
        if (it != out_of_empty.end()) {
          for (const Edge* e : it->second) {
            used.insert(e);
            std::string next = label + kPathSeparator + e->label;
            if (e->dep.is_empty()) {
              walk(head, e->dep, next);
            } else if (e->dep != head) {
              result.graph.edges.push_back({head, e->dep, next});
            }
          }
        }
        path.pop_back();
      };

  for (const Edge& e : graph.edges) {
    if (e.head.is_empty()) continue;
    if (!e.dep.is_empty()) {
      result.graph.edges.push_back(e);
      continue;
    }
    used.insert(&e);
    size_t before = result.graph.edges.size();
    walk(e.head, e.dep, e.label);
    if (result.graph.edges.size() == before) ++result.dropped_edges;
  }
  for (const Edge& e : graph.edges) {
    if (e.head.is_empty() && !used.count(&e)) ++result.dropped_edges;
  }
  result.graph.Normalize();
  return result;
}

CollapsedGraph MergeParallelEdges(const CollapsedGraph& graph) {
  std::map<std::pair<NodeId, NodeId>, std::vector<std::string>> groups;
  for (const Edge& e : graph.edges) groups[{e.head, e.dep}].push_back(e.label);
  CollapsedGraph merged;
  merged.n = graph.n;
  for (auto& [pair, labels] : groups) {
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    merged.edges.push_back({pair.first, pair.second,
                            JoinStrings(labels, kMergeSeparator)});
  }
  merged.Normalize();
  return merged;
}

CollapsedGraph SplitParallelEdges(const CollapsedGraph& graph) {
  CollapsedGraph split;
  split.n = graph.n;
  for (const Edge& e : graph.edges) {
    for (std::string& part : SplitString(e.label, kMergeSeparator)) {
      split.edges.push_back({e.head, e.dep, std::move(part)});
    }
  }
  split.Normalize();
  return split;
}

std::vector<std::string> SplitString(std::string_view text, char sep) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (true) {
    size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.emplace_back(text.substr(start));
      return parts;
    }
    parts.emplace_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string JoinStrings(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace eud
