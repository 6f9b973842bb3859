#include "eud/eval.h"

#include <algorithm>
#include <iomanip>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>
#include <tuple>

namespace eud {

namespace {

using Triple = std::tuple<NodeId, NodeId, std::string>;

// Exact triples are a set; truncation may map several of them to one
// universal triple, which is kept once per source edge.
std::map<Triple, long> EvalEdges(const EnhancedGraph& g, bool universal) {
  CollapsedGraph split = SplitParallelEdges(CollapseEmptyNodes(g).graph);
  std::set<Triple> exact;
  for (const Edge& e : split.edges) exact.emplace(e.head, e.dep, e.label);
  std::map<Triple, long> out;
  for (const auto& [head, dep, label] : exact) {
    ++out[{head, dep, universal ? UniversalLabel(label) : label}];
  }
  return out;
}

long Total(const std::map<Triple, long>& edges) {
  long total = 0;
  for (const auto& [triple, count] : edges) total += count;
  return total;
}

EvalResult Score(const std::vector<EnhancedGraph>& gold,
                 const std::vector<EnhancedGraph>& system,
                 const std::vector<std::string>& ids, bool universal) {
  if (gold.size() != system.size()) {
    throw EvalError("sentence count mismatch: gold " + std::to_string(gold.size()) +
                    ", system " + std::to_string(system.size()));
  }
  std::vector<std::string> mismatched;
  for (size_t k = 0; k < gold.size(); ++k) {
    if (gold[k].n != system[k].n) {
      mismatched.push_back(k < ids.size() && !ids[k].empty() ? ids[k]
                                                            : "#" + std::to_string(k + 1));
    }
  }
  if (!mismatched.empty()) {
    std::string list;
    for (const std::string& id : mismatched) list += (list.empty() ? "" : ", ") + id;
    throw EvalError("word count mismatch in sentences: " + list);
  }
  EvalResult r;
  for (size_t k = 0; k < gold.size(); ++k) {
    std::map<Triple, long> g = EvalEdges(gold[k], universal);
    std::map<Triple, long> s = EvalEdges(system[k], universal);
    r.gold_edges += Total(g);
    r.system_edges += Total(s);
    for (const auto& [triple, count] : s) {
      auto it = g.find(triple);
      if (it != g.end()) r.matched += std::min(count, it->second);
    }
  }
  return r;
}

}  // namespace

double EvalResult::precision() const {
  return system_edges ? static_cast<double>(matched) / system_edges : 0.0;
}

double EvalResult::recall() const {
  return gold_edges ? static_cast<double>(matched) / gold_edges : 0.0;
}

double EvalResult::f1() const {
  const double p = precision(), r = recall();
  return p + r > 0 ? 2.0 * p * r / (p + r) : 0.0;
}

EvalResult Elas(const std::vector<EnhancedGraph>& gold,
                const std::vector<EnhancedGraph>& system,
                const std::vector<std::string>& ids) {
  return Score(gold, system, ids, false);
}

EvalResult Eulas(const std::vector<EnhancedGraph>& gold,
                 const std::vector<EnhancedGraph>& system,
                 const std::vector<std::string>& ids) {
  return Score(gold, system, ids, true);
}

std::string UniversalLabel(const std::string& label) {
  std::vector<std::string> parts = SplitString(label, kPathSeparator);
  for (std::string& p : parts) p = p.substr(0, p.find(':'));
  return JoinStrings(parts, kPathSeparator);
}

double MacroAverage(const std::vector<double>& scores) {
  if (scores.empty()) throw std::invalid_argument("macro average of nothing");
  return std::accumulate(scores.begin(), scores.end(), 0.0) /
         static_cast<double>(scores.size());
}

void WriteMetric(std::ostream& out, const std::string& prefix,
                 const EvalResult& result) {
  out << std::fixed << std::setprecision(2);
  out << prefix << "_P=" << 100.0 * result.precision() << '\n';
  out << prefix << "_R=" << 100.0 * result.recall() << '\n';
  out << prefix << "_F1=" << 100.0 * result.f1() << '\n';
  out << std::defaultfloat;
}

}  // namespace eud
