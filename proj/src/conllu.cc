#include "eud/conllu.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace eud {

namespace {

constexpr int kColumns = 10;

bool ParseInt(std::string_view text, int* value) {
  if (text.empty() || text.size() > 9) return false;
  for (char c : text) {
    if (c < '0' || c > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), *value);
  return ec == std::errc() && ptr == text.data() + text.size();
}

std::optional<NodeId> TryParseNodeId(std::string_view text) {
  NodeId id;
  size_t dot = text.find('.');
  if (dot == std::string_view::npos) {
    if (!ParseInt(text, &id.major)) return std::nullopt;
    return id;
  }
  if (!ParseInt(text.substr(0, dot), &id.major) ||
      !ParseInt(text.substr(dot + 1), &id.minor) || id.minor == 0) {
    return std::nullopt;
  }
  return id;
}

std::optional<std::string> Opt(const std::string& cell) {
  if (cell == "_") return std::nullopt;
  return cell;
}

class SentenceBuilder {
 public:
  explicit SentenceBuilder(int first_line) : first_line_(first_line) {}

  bool empty() const { return sentence_.words.empty() && sentence_.comments.empty(); }

  void AddComment(std::string line) { sentence_.comments.push_back(std::move(line)); }

  void AddRow(const std::vector<std::string>& cols, int line) {
    const std::string& id_text = cols[0];
    size_t dash = id_text.find('-');
    if (dash != std::string::npos) {
      MwtRange range;
      if (!ParseInt(std::string_view(id_text).substr(0, dash), &range.start) ||
          !ParseInt(std::string_view(id_text).substr(dash + 1), &range.end) ||
          range.start > range.end || range.start == 0) {
        throw ConlluError("malformed multi-word token id '" + id_text + "'", line);
      }
      if (range.start != last_surface_ + 1 ||
          (!sentence_.mwt_ranges.empty() &&
           sentence_.mwt_ranges.back().end >= range.start)) {
        throw ConlluError("misplaced or overlapping multi-word token '" + id_text + "'", line);
      }
      range.form = cols[1];
      range.misc = cols[9];
      sentence_.mwt_ranges.push_back(std::move(range));
      return;
    }

    std::optional<NodeId> id = TryParseNodeId(id_text);
    if (!id) throw ConlluError("malformed word id '" + id_text + "'", line);
    if (!seen_.insert(*id).second) {
      throw ConlluError("duplicate word id '" + id_text + "'", line);
    }
    Word word;
    word.id = *id;
    word.form = cols[1];
    word.lemma = cols[2];
    word.upos = cols[3];
    word.xpos = cols[4];
    word.feats = cols[5];
    word.misc = cols[9];
    if (id->is_empty()) {
      if (id->major != last_surface_ ||
          (!sentence_.words.empty() && !(sentence_.words.back().id < *id))) {
        throw ConlluError("empty node '" + id_text + "' out of order", line);
      }
      if (cols[6] != "_" || cols[7] != "_") {
        throw ConlluError("empty node '" + id_text + "' must have no basic head", line);
      }
      sentence_.enhanced.empty_nodes.push_back(*id);
    } else {
      if (id->major != last_surface_ + 1) {
        throw ConlluError("word id '" + id_text + "' out of sequence", line);
      }
      last_surface_ = id->major;
      if (cols[6] != "_") {
        std::optional<NodeId> head = TryParseNodeId(cols[6]);
        if (!head || head->is_empty()) {
          throw ConlluError("non-numeric head '" + cols[6] + "'", line);
        }
        word.basic_head = *head;
      }
      word.basic_deprel = Opt(cols[7]);
    }
    if (cols[8] != "_") {
      for (const std::string& item : SplitString(cols[8], '|')) {
        size_t colon = item.find(':');
        std::optional<NodeId> head;
        if (colon != std::string::npos) head = TryParseNodeId(item.substr(0, colon));
        if (!head || colon + 1 >= item.size()) {
          throw ConlluError("malformed DEPS entry '" + item + "'", line);
        }
        sentence_.enhanced.edges.push_back({*head, *id, item.substr(colon + 1)});
      }
    }
    lines_.push_back(line);
    sentence_.words.push_back(std::move(word));
  }

  Sentence Finish() {
    sentence_.enhanced.n = last_surface_;
    for (const MwtRange& r : sentence_.mwt_ranges) {
      if (r.end > last_surface_) {
        throw ConlluError("multi-word token extends past the last word", first_line_);
      }
    }
    for (size_t k = 0; k < sentence_.words.size(); ++k) {
      const Word& w = sentence_.words[k];
      if (w.basic_head && w.basic_head->major > last_surface_) {
        throw ConlluError("head " + w.basic_head->ToString() + " does not exist", lines_[k]);
      }
    }
    for (const Edge& e : sentence_.enhanced.edges) {
      if (!e.head.is_root() && !seen_.count(e.head)) {
        throw ConlluError("enhanced head " + e.head.ToString() + " of word " +
                              e.dep.ToString() + " does not exist",
                          first_line_);
      }
    }
    sentence_.enhanced.Normalize();
    return std::move(sentence_);
  }

 private:
  int first_line_;
  int last_surface_ = 0;
  std::set<NodeId> seen_;
  std::vector<int> lines_;
  Sentence sentence_;
};

std::string HeadCell(const Word& w) {
  return w.basic_head ? w.basic_head->ToString() : "_";
}

}  // namespace

const Word& Sentence::word(int i) const { return *Find(SurfaceNode(i)); }

Word& Sentence::word(int i) {
  return const_cast<Word&>(*std::as_const(*this).Find(SurfaceNode(i)));
}

const Word* Sentence::Find(NodeId id) const {
  auto it = std::lower_bound(words.begin(), words.end(), id,
                             [](const Word& w, NodeId v) { return w.id < v; });
  if (it == words.end() || it->id != id) return nullptr;
  return &*it;
}

std::vector<std::string> Sentence::Forms() const {
  std::vector<std::string> forms;
  for (const Word& w : words) {
    if (!w.id.is_empty()) forms.push_back(w.form);
  }
  return forms;
}

std::string Sentence::SentId() const {
  constexpr std::string_view kPrefix = "# sent_id = ";
  for (const std::string& c : comments) {
    if (c.starts_with(kPrefix)) return c.substr(kPrefix.size());
  }
  return "";
}

void Sentence::SetEnhanced(const CollapsedGraph& graph) {
  std::erase_if(words, [](const Word& w) { return w.id.is_empty(); });
  enhanced = graph.ToEnhanced();
  enhanced.Normalize();
}

NodeId ParseNodeId(std::string_view text) {
  std::optional<NodeId> id = TryParseNodeId(text);
  if (!id) throw ConlluError("malformed node id '" + std::string(text) + "'", 0);
  return *id;
}

std::vector<Sentence> ParseConllu(std::istream& input) {
  std::vector<Sentence> sentences;
  std::string line;
  int line_number = 0;
  SentenceBuilder builder(1);
  std::vector<std::string> cols;
  while (std::getline(input, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (!builder.empty()) sentences.push_back(builder.Finish());
      builder = SentenceBuilder(line_number + 1);
      continue;
    }
    if (line[0] == '#') {
      builder.AddComment(line);
      continue;
    }
    cols = SplitString(line, '\t');
    if (cols.size() != kColumns) {
      throw ConlluError("expected 10 tab-separated columns, found " +
                            std::to_string(cols.size()),
                        line_number);
    }
    builder.AddRow(cols, line_number);
  }
  if (!builder.empty()) sentences.push_back(builder.Finish());
  return sentences;
}

std::vector<Sentence> ParseConllu(std::string_view text) {
  std::istringstream in{std::string(text)};
  return ParseConllu(in);
}

std::vector<Sentence> ReadConlluFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return ParseConllu(in);
}

void SerializeConllu(const std::vector<Sentence>& sentences, std::ostream& out) {
  for (const Sentence& s : sentences) {
    std::map<NodeId, std::vector<const Edge*>> deps;
    for (const Edge& e : s.enhanced.edges) {
      bool head_ok = e.head.is_root() || s.Find(e.head) != nullptr;
      if (!head_ok || s.Find(e.dep) == nullptr || e.dep.is_root()) {
        throw ConlluError("edge " + e.head.ToString() + "->" + e.dep.ToString() +
                              " references a missing node in sentence '" +
                              s.SentId() + "'",
                          0);
      }
      deps[e.dep].push_back(&e);
    }
    for (const std::string& c : s.comments) out << c << '\n';
    size_t next_range = 0;
    for (const Word& w : s.words) {
      if (!w.id.is_empty()) {
        while (next_range < s.mwt_ranges.size() &&
               s.mwt_ranges[next_range].start == w.id.major) {
          const MwtRange& r = s.mwt_ranges[next_range++];
          out << r.start << '-' << r.end << '\t' << r.form
              << "\t_\t_\t_\t_\t_\t_\t_\t" << r.misc << '\n';
        }
      }
      std::string deps_cell = "_";
      auto it = deps.find(w.id);
      if (it != deps.end()) {
        std::vector<const Edge*>& list = it->second;
        std::sort(list.begin(), list.end(), [](const Edge* a, const Edge* b) {
          return std::tie(a->head, a->label) < std::tie(b->head, b->label);
        });
        deps_cell.clear();
        for (size_t k = 0; k < list.size(); ++k) {
          if (k) deps_cell += '|';
          deps_cell += list[k]->head.ToString() + ":" + list[k]->label;
        }
      }
      out << w.id.ToString() << '\t' << w.form << '\t' << w.lemma << '\t'
          << w.upos << '\t' << w.xpos << '\t' << w.feats << '\t' << HeadCell(w)
          << '\t' << w.basic_deprel.value_or("_") << '\t' << deps_cell << '\t'
          << w.misc << '\n';
    }
    out << '\n';
  }
}

std::string SerializeConllu(const std::vector<Sentence>& sentences) {
  std::ostringstream out;
  SerializeConllu(sentences, out);
  return out.str();
}

void WriteConlluFile(const std::string& path, const std::vector<Sentence>& sentences) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  SerializeConllu(sentences, out);
}

}  // namespace eud
