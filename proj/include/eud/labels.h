// De-lexicalization of enhanced relation labels ("nmod:in" -> "nmod:[case]"),
// re-lexicalization of decoded graphs, and the lexicon lemmatizer behind it.

#ifndef EUD_LABELS_H_
#define EUD_LABELS_H_

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "eud/conllu.h"
#include "eud/graph.h"
#include "eud/spanning.h"

namespace eud {

// An atomic relation label split into its universal part and subtypes. A
// subtype written "[rel]" is a placeholder for the lemma of the dependent's
// child attached via relation rel.
struct DelexLabel {
  struct Part {
    std::string text;
    bool placeholder = false;
    friend bool operator==(const Part&, const Part&) = default;
  };
  std::string universal;
  std::vector<Part> subtypes;

  static DelexLabel Parse(std::string_view label);
  std::string Render() const;

  friend bool operator==(const DelexLabel&, const DelexLabel&) = default;
};

// Most frequent lemma per (form, UPOS), falling back to per-form counts.
class LemmaLexicon {
 public:
  static LemmaLexicon Build(const std::vector<Sentence>& sentences);

  void Add(const std::string& form, const std::string& upos,
           const std::string& lemma, long count = 1);
  std::optional<std::string> Lookup(std::string_view form,
                                    std::string_view upos) const;
  size_t size() const { return counts_.size(); }

  // "form<TAB>upos<TAB>lemma<TAB>count" lines, sorted.
  void Save(std::ostream& out) const;
  static LemmaLexicon Load(std::istream& in);

  friend bool operator==(const LemmaLexicon& a, const LemmaLexicon& b) {
    return a.counts_ == b.counts_;
  }

 private:
  void Refresh();

  std::map<std::tuple<std::string, std::string, std::string>, long> counts_;
  std::map<std::pair<std::string, std::string>, std::string> by_form_upos_;
  std::map<std::string, std::string> by_form_;
};

struct LexicalizationOptions {
  // Relations whose dependents' lemmas appear inside enhanced labels.
  std::vector<std::string> relations = {"case", "mark", "cc"};
  // Children of a lexicalizing child joined with "_" (multiword markers
  // such as "according_to").
  std::string fixed_relation = "fixed";
};

// Subtypes seen in basic DEPREL labels ("relcl", "poss", "pass", ...);
// these are grammatical and stay literal.
std::set<std::string> HarvestGrammaticalSubtypes(
    const std::vector<Sentence>& sentences);

struct DelexResult {
  CollapsedGraph graph;  // same edges in the same order, relabeled
  std::vector<int> edge_failures;  // per edge, subtypes that could not be matched
  int failures = 0;
  int placeholders = 0;
};

// Uses gold lemmas of `sentence`. Composite labels are handled per atomic
// component.
DelexResult Delexicalize(const Sentence& sentence, const CollapsedGraph& graph,
                         const std::set<std::string>& grammatical,
                         const LexicalizationOptions& options = {});

struct RelexResult {
  CollapsedGraph graph;
  int failures = 0;
  int filled = 0;
};

// Fills placeholders from the lexicon lemmas of children in `graph`,
// preferring children attached by a tree edge when `tree` is given.
RelexResult Relexicalize(const Sentence& sentence, const CollapsedGraph& graph,
                         const LemmaLexicon& lexicon,
                         const SpanningTree* tree = nullptr,
                         const LexicalizationOptions& options = {});

struct RoundTripCoverage {
  long lexical_edges = 0;   // edges whose delexicalized label has a placeholder
  long eligible = 0;        // ... delexicalized with no failures
  long restored = 0;        // ... whose relexicalized label equals the gold label
  long lexicon_covered = 0; // eligible edges where the lexicon returns gold lemmas
  long covered_restored = 0;
  double coverage() const { return eligible ? static_cast<double>(restored) / eligible : 1.0; }
};

// relex(delex(gold)) measured against gold on collapsed, merged graphs.
RoundTripCoverage MeasureRoundTrip(const std::vector<Sentence>& sentences,
                                   const std::set<std::string>& grammatical,
                                   const LemmaLexicon& lexicon,
                                   const LexicalizationOptions& options = {});

std::string AsciiLower(std::string_view text);

}  // namespace eud

#endif  // EUD_LABELS_H_
