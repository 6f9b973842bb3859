// CoNLL-U reader and writer with multi-word token ranges, empty nodes and
// the DEPS column.

#ifndef EUD_CONLLU_H_
#define EUD_CONLLU_H_

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "eud/graph.h"

namespace eud {

struct Word {
  NodeId id;
  std::string form;
  std::string lemma = "_";
  std::string upos = "_";
  std::string xpos = "_";
  std::string feats = "_";
  // Absent for empty nodes, and for surface words of unparsed input.
  std::optional<NodeId> basic_head;
  std::optional<std::string> basic_deprel;
  std::string misc = "_";

  friend bool operator==(const Word&, const Word&) = default;
};

struct MwtRange {
  int start = 0;
  int end = 0;
  std::string form;
  std::string misc = "_";

  friend bool operator==(const MwtRange&, const MwtRange&) = default;
};

struct Sentence {
  std::vector<Word> words;  // surface words and empty nodes in file order
  std::vector<MwtRange> mwt_ranges;
  EnhancedGraph enhanced;
  std::vector<std::string> comments;  // verbatim, including the leading '#'

  // Number of surface words.
  int size() const { return enhanced.n; }
  // Surface word i (1-based).
  const Word& word(int i) const;
  Word& word(int i);
  const Word* Find(NodeId id) const;
  std::vector<std::string> Forms() const;
  // Value of the "# sent_id = ..." comment, or "" if missing.
  std::string SentId() const;

  // Drops empty nodes and replaces the enhanced graph.
  void SetEnhanced(const CollapsedGraph& graph);

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

class ConlluError : public std::runtime_error {
 public:
  ConlluError(const std::string& message, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

std::vector<Sentence> ParseConllu(std::istream& input);
std::vector<Sentence> ParseConllu(std::string_view text);
std::vector<Sentence> ReadConlluFile(const std::string& path);

// Throws ConlluError (line 0) if an enhanced edge references a missing node.
void SerializeConllu(const std::vector<Sentence>& sentences,
                     std::ostream& output);
std::string SerializeConllu(const std::vector<Sentence>& sentences);
void WriteConlluFile(const std::string& path,
                     const std::vector<Sentence>& sentences);

NodeId ParseNodeId(std::string_view text);

}  // namespace eud

#endif  // EUD_CONLLU_H_
