// Sentence-level glue between CoNLL-U data and the scorer: turning gold
// sentences into training targets, and parsing sentences into CoNLL-U output.

#ifndef EUD_PIPELINE_H_
#define EUD_PIPELINE_H_

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "eud/conllu.h"
#include "eud/decode.h"
#include "eud/graph.h"
#include "eud/labels.h"
#include "eud/scorer.h"
#include "eud/spanning.h"

namespace eud {

struct PreparedSentence {
  std::string id;
  std::vector<std::string> forms;
  CollapsedGraph gold;  // collapsed, merged, de-lexicalized
  std::optional<SpanningTree> tree;
  std::vector<Edge> residual;
};

struct PreparationStats {
  int sentences = 0;
  int extraction_failures = 0;
  int delex_failures = 0;
  int delex_placeholders = 0;
  int dropped_empty_edges = 0;
  int skipped = 0;  // empty sentences or graphs that could not be collapsed
  std::vector<std::string> warnings;  // prefixed codes, one per event
};

struct PreparedCorpus {
  std::vector<PreparedSentence> sentences;
  PreparationStats stats;
};

// collapse -> merge -> delexicalize -> extract tree -> residual edges.
PreparedCorpus PrepareCorpus(const std::vector<Sentence>& sentences,
                             const std::set<std::string>& grammatical,
                             const LexicalizationOptions& options = {});

struct Vocabularies {
  std::vector<std::string> words;
  std::vector<std::string> labels;
};

// Sorted word forms and de-lexicalized labels of the prepared corpus.
Vocabularies CollectVocabularies(const PreparedCorpus& corpus);

// Thrown when a gold label is missing from the model's closed vocabulary.
class VocabularyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tree-graph models learn the tree and the residual edges (tree pairs are
// excluded from graph negatives); graph-fix models learn every gold edge with
// the graph DBF and no tree. Without a tree, the graph DBF sees all gold edges.
TrainingTargets MakeTargets(const ScoreModel& model,
                            const PreparedSentence& sentence);

struct ParseOptions {
  DecodeOptions decode;
  bool write_tree = false;  // overwrite HEAD/DEPREL with the decoded tree
  int workers = 1;
  LexicalizationOptions lex;
};

struct ParseStats {
  int collisions = 0;
  int relex_failures = 0;
  std::vector<std::string> warnings;
};

// Fills DEPS of each sentence: decode, relexicalize, split merged labels.
// Empty nodes in the input are dropped. Output order matches input order for
// any worker count.
std::vector<Sentence> ParseCorpus(const ScoreModel& model,
                                  const LemmaLexicon& lexicon,
                                  const std::vector<Sentence>& input,
                                  const ParseOptions& options = {},
                                  ParseStats* stats = nullptr);

}  // namespace eud

#endif  // EUD_PIPELINE_H_
