// Multi-word token expansion: a most-frequent-split lexicon harvested from
// training data with an ordered prefix/suffix rule engine as fallback.

#ifndef EUD_MWT_H_
#define EUD_MWT_H_

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "eud/conllu.h"

namespace eud {

class MwtLexicon {
 public:
  struct Entry {
    std::vector<std::string> words;
    long count = 0;
  };

  static MwtLexicon Build(const std::vector<Sentence>& sentences);

  void Add(const std::string& form, const std::vector<std::string>& words,
           long count = 1);
  // Modal split for the exact form; ties go to the lexicographically
  // smallest split.
  std::optional<Entry> LookupExact(std::string_view form) const;
  // Modal split among all forms with the same lowercase spelling.
  std::optional<Entry> LookupLower(std::string_view form) const;
  bool empty() const { return counts_.empty(); }

  // "form<TAB>w1 w2 ...<TAB>count" lines, sorted.
  void Save(std::ostream& out) const;
  static MwtLexicon Load(std::istream& in);

 private:
  void Refresh();

  std::map<std::string, std::map<std::vector<std::string>, long>> counts_;
  std::map<std::string, Entry> exact_;
  std::map<std::string, Entry> lower_;
};

struct SplitRule {
  enum class Kind { kPrefix, kSuffix };
  Kind kind = Kind::kSuffix;
  std::string pattern;      // peeled off the token
  std::string replacement;  // word emitted for the peeled part
  int min_remainder = 1;    // characters (bytes) that must remain

  friend bool operator==(const SplitRule&, const SplitRule&) = default;
};

// "prefix|suffix<TAB>pattern<TAB>replacement<TAB>min_remainder" per line;
// blank lines and lines starting with '#' are ignored.
std::vector<SplitRule> ParseSplitRules(std::istream& in);

class ExpansionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Lexicon hit (exact, then lowercase) or any applicable rule.
bool ShouldExpand(std::string_view form, const MwtLexicon& lexicon,
                  const std::vector<SplitRule>& rules);

// Lexicon split if present; otherwise rules are applied repeatedly, first
// match in list order, until none applies. Returns {form} when nothing
// applies.
std::vector<std::string> Expand(std::string_view form, const MwtLexicon& lexicon,
                                const std::vector<SplitRule>& rules);

struct WordSegmentationScore {
  long gold_words = 0;
  long system_words = 0;
  long matched = 0;
  double precision() const { return system_words ? static_cast<double>(matched) / system_words : 0.0; }
  double recall() const { return gold_words ? static_cast<double>(matched) / gold_words : 0.0; }
  double f1() const {
    const double p = precision(), r = recall();
    return p + r > 0 ? 2 * p * r / (p + r) : 0.0;
  }
};

// Rebuilds tokens from gold sentences, expands each token and compares the
// resulting words to the gold words token by token.
WordSegmentationScore ScoreExpansion(const std::vector<Sentence>& gold,
                                     const MwtLexicon& lexicon,
                                     const std::vector<SplitRule>& rules);

// Expands every surface word not already inside a multi-word token. Split
// pieces after the first attach to the first with relation "dep"; all ids
// and heads are renumbered.
Sentence ExpandSentence(const Sentence& sentence, const MwtLexicon& lexicon,
                        const std::vector<SplitRule>& rules);

}  // namespace eud

#endif  // EUD_MWT_H_
