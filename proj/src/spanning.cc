#include "eud/spanning.h"

#include <algorithm>
#include <set>

namespace eud {

namespace {

std::string Describe(const Sentence& s) {
  std::string id = s.SentId();
  return id.empty() ? "sentence" : "sentence '" + id + "'";
}

}  // namespace

SpanningTree SpanningTree::Unlabeled(std::vector<int> heads) {
  SpanningTree t;
  t.n = static_cast<int>(heads.size()) - 1;
  t.heads = std::move(heads);
  t.labels.assign(t.heads.size(), "");
  return t;
}

std::vector<Edge> SpanningTree::Edges() const {
  std::vector<Edge> edges;
  for (int j = 1; j <= n; ++j) {
    edges.push_back({SurfaceNode(heads[j]), SurfaceNode(j), labels[j]});
  }
  return edges;
}

std::vector<int> ComputeBasicDepth(const Sentence& sentence) {
  const int n = sentence.size();
  std::vector<int> head(n + 1, -1);
  for (int i = 1; i <= n; ++i) {
    const Word& w = sentence.word(i);
    if (!w.basic_head) {
      throw ExtractionError(Describe(sentence) + ": word " + std::to_string(i) +
                            " has no basic head");
    }
    head[i] = w.basic_head->major;
  }
  std::vector<int> depth(n + 1, -1);
  depth[0] = 0;
  for (int i = 1; i <= n; ++i) {
    std::vector<int> chain;
    int u = i;
    while (depth[u] < 0) {
      if (static_cast<int>(chain.size()) > n) {
        throw ExtractionError(Describe(sentence) + ": basic tree has a cycle");
      }
      chain.push_back(u);
      u = head[u];
    }
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      depth[*it] = depth[u] + 1;
      u = *it;
    }
  }
  return depth;
}

bool IsTree(const std::vector<int>& heads) {
  const int n = static_cast<int>(heads.size()) - 1;
  for (int j = 1; j <= n; ++j) {
    if (heads[j] < 0 || heads[j] > n || heads[j] == j) return false;
  }
  // 0 = unvisited, 1 = on current walk, 2 = known to reach the root.
  std::vector<int> state(n + 1, 0);
  state[0] = 2;
  for (int j = 1; j <= n; ++j) {
    std::vector<int> walk;
    int u = j;
    while (state[u] == 0) {
      state[u] = 1;
      walk.push_back(u);
      u = heads[u];
    }
    if (state[u] == 1) return false;
    for (int v : walk) state[v] = 2;
  }
  return true;
}

SpanningTree ExtractSpanningTree(const Sentence& sentence,
                                 const CollapsedGraph& graph) {
  const int n = graph.n;
  std::vector<int> depth = ComputeBasicDepth(sentence);
  std::vector<std::vector<const Edge*>> incoming(n + 1);
  for (const Edge& e : graph.edges) {
    if (e.dep.major >= 1 && e.dep.major <= n) incoming[e.dep.major].push_back(&e);
  }

  SpanningTree tree;
  tree.n = n;
  tree.heads.assign(n + 1, -1);
  tree.labels.assign(n + 1, "");
  auto by_head_label = [](const Edge* a, const Edge* b) {
    return std::tie(a->head, a->label) < std::tie(b->head, b->label);
  };
  for (int j = 1; j <= n; ++j) {
    std::vector<const Edge*>& in = incoming[j];
    if (in.empty()) {
      throw ExtractionError(Describe(sentence) + ": word " + std::to_string(j) +
                            " has no incoming enhanced edge");
    }
    std::sort(in.begin(), in.end(), by_head_label);
    const Edge* chosen = nullptr;
    if (in.size() == 1) {
      chosen = in.front();
    } else {
      const int basic = sentence.word(j).basic_head->major;
      for (const Edge* e : in) {
        if (e->head.major == basic) {
          chosen = e;
          break;
        }
      }
      if (!chosen) {
        // Sorted by (head, label), so strict < keeps the first minimum.
        for (const Edge* e : in) {
          if (!chosen || depth[e->head.major] < depth[chosen->head.major]) {
            chosen = e;
          }
        }
      }
    }
    tree.heads[j] = chosen->head.major;
    tree.labels[j] = chosen->label;
  }
  if (!IsTree(tree.heads)) {
    throw ExtractionError(Describe(sentence) +
                          ": extracted head assignment is not a tree");
  }
  return tree;
}

std::vector<Edge> ResidualEdges(const CollapsedGraph& graph,
                                const SpanningTree& tree) {
  std::vector<Edge> tree_edges = tree.Edges();
  std::set<Edge> in_tree(tree_edges.begin(), tree_edges.end());
  std::vector<Edge> residual;
  for (const Edge& e : graph.edges) {
    if (!in_tree.count(e)) residual.push_back(e);
  }
  return residual;
}

}  // namespace eud
