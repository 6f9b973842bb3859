#include "eud/labels.h"

#include <algorithm>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace eud {

namespace {

using LemmaSource = std::function<std::string(const Word&)>;

// A composite label as atomic labels plus the delimiters between them.
struct CompositeLabel {
  std::vector<std::string> atoms;
  std::vector<char> separators;

  static CompositeLabel Parse(std::string_view label) {
    CompositeLabel c;
    std::string current;
    for (char ch : label) {
      if (ch == kMergeSeparator || ch == kPathSeparator) {
        c.atoms.push_back(std::move(current));
        current.clear();
        c.separators.push_back(ch);
      } else {
        current += ch;
      }
    }
    c.atoms.push_back(std::move(current));
    return c;
  }

  std::string Render() const {
    std::string out = atoms[0];
    for (size_t k = 0; k < separators.size(); ++k) out += separators[k] + atoms[k + 1];
    return out;
  }
};

// Universal relations carried by an edge label, one per atomic component.
std::vector<std::string> UniversalParts(std::string_view label) {
  std::vector<std::string> out;
  for (const std::string& atom : CompositeLabel::Parse(label).atoms) {
    out.push_back(DelexLabel::Parse(atom).universal);
  }
  return out;
}

bool HasRelation(std::string_view label, std::string_view relation) {
  for (const std::string& u : UniversalParts(label)) {
    if (u == relation) return true;
  }
  return false;
}

// Children of `dep` attached by `relation`, tree-edge children first when a
// tree is given, otherwise in word order.
std::vector<int> ChildrenVia(const CollapsedGraph& graph, int dep,
                             std::string_view relation,
                             const SpanningTree* tree) {
  std::vector<int> children;
  for (const Edge& e : graph.edges) {
    if (e.head.major == dep && e.head.minor == 0 && HasRelation(e.label, relation)) {
      children.push_back(e.dep.major);
    }
  }
  std::sort(children.begin(), children.end());
  children.erase(std::unique(children.begin(), children.end()), children.end());
  if (tree) {
    std::stable_partition(children.begin(), children.end(), [&](int c) {
      return tree->heads[c] == dep;
    });
  }
  return children;
}

// Lemma of `child` joined with its fixed-relation dependents.
std::string LexicalKey(const Sentence& s, const CollapsedGraph& graph, int child,
                       const LemmaSource& lemma_of,
                       const LexicalizationOptions& options) {
  std::string key = lemma_of(s.word(child));
  for (int f : ChildrenVia(graph, child, options.fixed_relation, nullptr)) {
    key += "_" + lemma_of(s.word(f));
  }
  return key;
}

std::string GoldLemma(const Word& w) {
  return AsciiLower(w.lemma == "_" ? w.form : w.lemma);
}

RelexResult RelexWith(const Sentence& sentence, const CollapsedGraph& graph,
                      const LemmaSource& lemma_of, const SpanningTree* tree,
                      const LexicalizationOptions& options) {
  RelexResult result;
  result.graph = graph;
  for (Edge& e : result.graph.edges) {
    CompositeLabel composite = CompositeLabel::Parse(e.label);
    for (std::string& atom : composite.atoms) {
      DelexLabel label = DelexLabel::Parse(atom);
      std::vector<DelexLabel::Part> kept;
      for (DelexLabel::Part& part : label.subtypes) {
        if (!part.placeholder) {
          kept.push_back(part);
          continue;
        }
        std::vector<int> children = ChildrenVia(graph, e.dep.major, part.text, tree);
        if (children.empty()) {
          ++result.failures;
          continue;
        }
        kept.push_back({LexicalKey(sentence, graph, children.front(), lemma_of, options), false});
        ++result.filled;
      }
      label.subtypes = std::move(kept);
      atom = label.Render();
    }
    e.label = composite.Render();
  }
  return result;
}

}  // namespace

std::string AsciiLower(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

DelexLabel DelexLabel::Parse(std::string_view label) {
  std::vector<std::string> pieces = SplitString(label, ':');
  DelexLabel d;
  d.universal = pieces[0];
  for (size_t k = 1; k < pieces.size(); ++k) {
    const std::string& p = pieces[k];
    if (p.size() >= 2 && p.front() == '[' && p.back() == ']') {
      d.subtypes.push_back({p.substr(1, p.size() - 2), true});
    } else {
      d.subtypes.push_back({p, false});
    }
  }
  return d;
}

std::string DelexLabel::Render() const {
  std::string out = universal;
  for (const Part& p : subtypes) {
    out += ':';
    out += p.placeholder ? "[" + p.text + "]" : p.text;
  }
  return out;
}

LemmaLexicon LemmaLexicon::Build(const std::vector<Sentence>& sentences) {
  LemmaLexicon lex;
  for (const Sentence& s : sentences) {
    for (const Word& w : s.words) {
      if (w.id.is_empty() || w.lemma == "_") continue;
      lex.counts_[{w.form, w.upos, w.lemma}] += 1;
    }
  }
  lex.Refresh();
  return lex;
}

void LemmaLexicon::Add(const std::string& form, const std::string& upos,
                       const std::string& lemma, long count) {
  counts_[{form, upos, lemma}] += count;
  Refresh();
}

void LemmaLexicon::Refresh() {
  std::map<std::pair<std::string, std::string>, std::pair<long, std::string>> best_pair;
  std::map<std::string, std::map<std::string, long>> per_form;
  for (const auto& [key, count] : counts_) {
    const auto& [form, upos, lemma] = key;
    auto& slot = best_pair[{form, upos}];
    // Iteration is in lemma order, so strict > keeps the smallest lemma on ties.
    if (count > slot.first) slot = {count, lemma};
    per_form[form][lemma] += count;
  }
  by_form_upos_.clear();
  by_form_.clear();
  for (auto& [key, slot] : best_pair) by_form_upos_[key] = slot.second;
  for (auto& [form, lemmas] : per_form) {
    long top = 0;
    for (auto& [lemma, count] : lemmas) {
      if (count > top) {
        top = count;
        by_form_[form] = lemma;
      }
    }
  }
}

std::optional<std::string> LemmaLexicon::Lookup(std::string_view form,
                                                std::string_view upos) const {
  auto it = by_form_upos_.find({std::string(form), std::string(upos)});
  if (it != by_form_upos_.end()) return it->second;
  auto jt = by_form_.find(std::string(form));
  if (jt != by_form_.end()) return jt->second;
  return std::nullopt;
}

void LemmaLexicon::Save(std::ostream& out) const {
  for (const auto& [key, count] : counts_) {
    const auto& [form, upos, lemma] = key;
    out << form << '\t' << upos << '\t' << lemma << '\t' << count << '\n';
  }
}

LemmaLexicon LemmaLexicon::Load(std::istream& in) {
  LemmaLexicon lex;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::vector<std::string> cols = SplitString(line, '\t');
    long count = 0;
    try {
      if (cols.size() != 4) throw std::invalid_argument("columns");
      size_t used = 0;
      count = std::stol(cols[3], &used);
      if (used != cols[3].size() || count <= 0) throw std::invalid_argument("count");
    } catch (const std::exception&) {
      throw std::runtime_error("lemma lexicon line " + std::to_string(line_number) +
                               ": expected form, upos, lemma, positive count");
    }
    lex.counts_[{cols[0], cols[1], cols[2]}] += count;
  }
  lex.Refresh();
  return lex;
}

std::set<std::string> HarvestGrammaticalSubtypes(const std::vector<Sentence>& sentences) {
  std::set<std::string> subtypes;
  for (const Sentence& s : sentences) {
    for (const Word& w : s.words) {
      if (!w.basic_deprel) continue;
      std::vector<std::string> parts = SplitString(*w.basic_deprel, ':');
      for (size_t k = 1; k < parts.size(); ++k) subtypes.insert(parts[k]);
    }
  }
  return subtypes;
}

DelexResult Delexicalize(const Sentence& sentence, const CollapsedGraph& graph,
                         const std::set<std::string>& grammatical,
                         const LexicalizationOptions& options) {
  DelexResult result;
  result.graph = graph;
  result.edge_failures.assign(graph.edges.size(), 0);
  for (size_t k = 0; k < result.graph.edges.size(); ++k) {
    Edge& e = result.graph.edges[k];
    CompositeLabel composite = CompositeLabel::Parse(e.label);
    for (std::string& atom : composite.atoms) {
      DelexLabel label = DelexLabel::Parse(atom);
      std::vector<DelexLabel::Part> kept;
      for (const DelexLabel::Part& part : label.subtypes) {
        if (grammatical.count(part.text)) {
          kept.push_back(part);
          continue;
        }
        std::optional<std::string> relation;
        for (const std::string& r : options.relations) {
          for (int c : ChildrenVia(graph, e.dep.major, r, nullptr)) {
            if (LexicalKey(sentence, graph, c, GoldLemma, options) == part.text) {
              relation = r;
              break;
            }
          }
          if (relation) break;
        }
        if (relation) {
          kept.push_back({*relation, true});
          ++result.placeholders;
        } else {
          ++result.edge_failures[k];
          ++result.failures;
        }
      }
      label.subtypes = std::move(kept);
      atom = label.Render();
    }
    e.label = composite.Render();
  }
  return result;
}

RelexResult Relexicalize(const Sentence& sentence, const CollapsedGraph& graph,
                         const LemmaLexicon& lexicon, const SpanningTree* tree,
                         const LexicalizationOptions& options) {
  LemmaSource from_lexicon = [&](const Word& w) {
    std::optional<std::string> lemma = lexicon.Lookup(w.form, w.upos);
    return AsciiLower(lemma ? *lemma : w.form);
  };
  return RelexWith(sentence, graph, from_lexicon, tree, options);
}

RoundTripCoverage MeasureRoundTrip(const std::vector<Sentence>& sentences,
                                   const std::set<std::string>& grammatical,
                                   const LemmaLexicon& lexicon,
                                   const LexicalizationOptions& options) {
  RoundTripCoverage coverage;
  for (const Sentence& s : sentences) {
    CollapsedGraph gold = MergeParallelEdges(CollapseEmptyNodes(s.enhanced).graph);
    DelexResult delex = Delexicalize(s, gold, grammatical, options);
    RelexResult relex = Relexicalize(s, delex.graph, lexicon, nullptr, options);
    RelexResult oracle = RelexWith(s, delex.graph, GoldLemma, nullptr, options);
    for (size_t k = 0; k < gold.edges.size(); ++k) {
      if (delex.graph.edges[k].label.find('[') == std::string::npos) continue;
      ++coverage.lexical_edges;
      if (delex.edge_failures[k] > 0) continue;
      ++coverage.eligible;
      const bool restored = relex.graph.edges[k].label == gold.edges[k].label;
      if (restored) ++coverage.restored;
      if (relex.graph.edges[k].label == oracle.graph.edges[k].label) {
        ++coverage.lexicon_covered;
        if (restored) ++coverage.covered_restored;
      }
    }
  }
  return coverage;
}

}  // namespace eud
