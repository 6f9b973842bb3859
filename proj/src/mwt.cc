#include "eud/mwt.h"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "eud/labels.h"

namespace eud {

namespace {

bool IsAsciiUpper(char c) { return c >= 'A' && c <= 'Z'; }

std::string Capitalize(std::string text) {
  if (!text.empty() && text[0] >= 'a' && text[0] <= 'z') {
    text[0] = static_cast<char>(text[0] - 'a' + 'A');
  }
  return text;
}

const SplitRule* FirstApplicable(std::string_view remainder,
                                 const std::vector<SplitRule>& rules) {
  for (const SplitRule& rule : rules) {
    if (rule.pattern.empty() || rule.pattern.size() >= remainder.size()) continue;
    const size_t left = remainder.size() - rule.pattern.size();
    if (static_cast<int>(left) < std::max(rule.min_remainder, 1)) continue;
    const bool match = rule.kind == SplitRule::Kind::kPrefix
                           ? remainder.starts_with(rule.pattern)
                           : remainder.ends_with(rule.pattern);
    if (match) return &rule;
  }
  return nullptr;
}

std::optional<MwtLexicon::Entry> Modal(
    const std::map<std::vector<std::string>, long>& splits) {
  std::optional<MwtLexicon::Entry> best;
  // Map order is lexicographic, so strict > keeps the smallest on ties.
  for (const auto& [words, count] : splits) {
    if (!best || count > best->count) best = MwtLexicon::Entry{words, count};
  }
  return best;
}

}  // namespace

MwtLexicon MwtLexicon::Build(const std::vector<Sentence>& sentences) {
  MwtLexicon lex;
  for (const Sentence& s : sentences) {
    for (const MwtRange& r : s.mwt_ranges) {
      std::vector<std::string> words;
      for (int i = r.start; i <= r.end; ++i) words.push_back(s.word(i).form);
      if (words.size() >= 2) lex.counts_[r.form][words] += 1;
    }
  }
  lex.Refresh();
  return lex;
}

void MwtLexicon::Add(const std::string& form, const std::vector<std::string>& words,
                     long count) {
  if (words.size() < 2) throw std::invalid_argument("a split needs at least two words");
  counts_[form][words] += count;
  Refresh();
}

void MwtLexicon::Refresh() {
  exact_.clear();
  lower_.clear();
  std::map<std::string, std::map<std::vector<std::string>, long>> lowered;
  for (const auto& [form, splits] : counts_) {
    exact_[form] = *Modal(splits);
    for (const auto& [words, count] : splits) {
      std::vector<std::string> lw;
      for (const std::string& w : words) lw.push_back(AsciiLower(w));
      lowered[AsciiLower(form)][lw] += count;
    }
  }
  for (const auto& [form, splits] : lowered) lower_[form] = *Modal(splits);
}

std::optional<MwtLexicon::Entry> MwtLexicon::LookupExact(std::string_view form) const {
  auto it = exact_.find(std::string(form));
  if (it == exact_.end()) return std::nullopt;
  return it->second;
}

std::optional<MwtLexicon::Entry> MwtLexicon::LookupLower(std::string_view form) const {
  auto it = lower_.find(AsciiLower(form));
  if (it == lower_.end()) return std::nullopt;
  return it->second;
}

void MwtLexicon::Save(std::ostream& out) const {
  for (const auto& [form, splits] : counts_) {
    for (const auto& [words, count] : splits) {
      out << form << '\t';
      for (size_t k = 0; k < words.size(); ++k) out << (k ? " " : "") << words[k];
      out << '\t' << count << '\n';
    }
  }
}

MwtLexicon MwtLexicon::Load(std::istream& in) {
  MwtLexicon lex;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::vector<std::string> cols = SplitString(line, '\t');
    std::vector<std::string> words;
    long count = 0;
    if (cols.size() == 3) {
      std::istringstream ws(cols[1]);
      for (std::string w; ws >> w;) words.push_back(w);
      try {
        size_t used = 0;
        count = std::stol(cols[2], &used);
        if (used != cols[2].size()) count = 0;
      } catch (const std::exception&) {
        count = 0;
      }
    }
    if (words.size() < 2 || count <= 0) {
      throw std::runtime_error("MWT lexicon line " + std::to_string(line_number) +
                               ": expected form, at least two words, positive count");
    }
    lex.counts_[cols[0]][words] += count;
  }
  lex.Refresh();
  return lex;
}

std::vector<SplitRule> ParseSplitRules(std::istream& in) {
  std::vector<SplitRule> rules;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols = SplitString(line, '\t');
    auto fail = [&](const std::string& why) {
      return std::runtime_error("rule line " + std::to_string(line_number) + ": " + why);
    };
    if (cols.size() != 4) throw fail("expected 4 tab-separated columns");
    SplitRule rule;
    if (cols[0] == "prefix") {
      rule.kind = SplitRule::Kind::kPrefix;
    } else if (cols[0] == "suffix") {
      rule.kind = SplitRule::Kind::kSuffix;
    } else {
      throw fail("kind must be prefix or suffix");
    }
    if (cols[1].empty()) throw fail("empty pattern");
    rule.pattern = cols[1];
    rule.replacement = cols[2];
    try {
      size_t used = 0;
      rule.min_remainder = std::stoi(cols[3], &used);
      if (used != cols[3].size() || rule.min_remainder < 0) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw fail("min_remainder must be a non-negative integer");
    }
    rules.push_back(std::move(rule));
  }
  return rules;
}

bool ShouldExpand(std::string_view form, const MwtLexicon& lexicon,
                  const std::vector<SplitRule>& rules) {
  if (lexicon.LookupExact(form) || lexicon.LookupLower(form)) return true;
  return FirstApplicable(form, rules) != nullptr;
}

std::vector<std::string> Expand(std::string_view form, const MwtLexicon& lexicon,
                                const std::vector<SplitRule>& rules) {
  if (auto hit = lexicon.LookupExact(form)) return hit->words;
  if (auto hit = lexicon.LookupLower(form)) {
    std::vector<std::string> words = hit->words;
    if (!form.empty() && IsAsciiUpper(form[0])) words[0] = Capitalize(words[0]);
    return words;
  }
  std::vector<std::string> front, back;
  std::string remainder(form);
  size_t peels = 0;
  while (const SplitRule* rule = FirstApplicable(remainder, rules)) {
    if (++peels > form.size()) {
      throw ExpansionError("rule application did not terminate on '" +
                           std::string(form) + "'");
    }
    if (rule->kind == SplitRule::Kind::kPrefix) {
      front.push_back(rule->replacement);
      remainder.erase(0, rule->pattern.size());
    } else {
      back.push_back(rule->replacement);
      remainder.resize(remainder.size() - rule->pattern.size());
    }
  }
  std::vector<std::string> words = std::move(front);
  words.push_back(remainder);
  words.insert(words.end(), back.rbegin(), back.rend());
  return words;
}

WordSegmentationScore ScoreExpansion(const std::vector<Sentence>& gold,
                                     const MwtLexicon& lexicon,
                                     const std::vector<SplitRule>& rules) {
  WordSegmentationScore score;
  for (const Sentence& s : gold) {
    size_t next_range = 0;
    for (int i = 1; i <= s.size();) {
      std::string token;
      std::vector<std::string> gold_words;
      if (next_range < s.mwt_ranges.size() && s.mwt_ranges[next_range].start == i) {
        const MwtRange& r = s.mwt_ranges[next_range++];
        token = r.form;
        for (int k = r.start; k <= r.end; ++k) gold_words.push_back(s.word(k).form);
        i = r.end + 1;
      } else {
        token = s.word(i).form;
        gold_words.push_back(token);
        ++i;
      }
      std::vector<std::string> predicted =
          ShouldExpand(token, lexicon, rules) ? Expand(token, lexicon, rules)
                                              : std::vector<std::string>{token};
      score.gold_words += static_cast<long>(gold_words.size());
      score.system_words += static_cast<long>(predicted.size());
      std::sort(gold_words.begin(), gold_words.end());
      std::sort(predicted.begin(), predicted.end());
      std::vector<std::string> common;
      std::set_intersection(gold_words.begin(), gold_words.end(), predicted.begin(),
                            predicted.end(), std::back_inserter(common));
      score.matched += static_cast<long>(common.size());
    }
  }
  return score;
}

Sentence ExpandSentence(const Sentence& sentence, const MwtLexicon& lexicon,
                        const std::vector<SplitRule>& rules) {
  const int n = sentence.size();
  std::vector<bool> in_range(n + 1, false);
  for (const MwtRange& r : sentence.mwt_ranges) {
    for (int i = r.start; i <= r.end; ++i) in_range[i] = true;
  }
  std::vector<std::vector<std::string>> pieces(n + 1);
  std::vector<int> first(n + 1, 0), last(n + 1, 0);
  int next_id = 0;
  for (int i = 1; i <= n; ++i) {
    const std::string& form = sentence.word(i).form;
    if (!in_range[i] && ShouldExpand(form, lexicon, rules)) {
      pieces[i] = Expand(form, lexicon, rules);
    }
    if (pieces[i].size() < 2) pieces[i] = {form};
    first[i] = next_id + 1;
    next_id += static_cast<int>(pieces[i].size());
    last[i] = next_id;
  }
  auto remap = [&](NodeId id) {
    if (id.is_root()) return id;
    if (id.is_empty()) return NodeId{id.major == 0 ? 0 : last[id.major], id.minor};
    return SurfaceNode(first[id.major]);
  };

  Sentence out;
  out.comments = sentence.comments;
  for (const Word& w : sentence.words) {
    if (w.id.is_empty()) {
      Word e = w;
      e.id = remap(w.id);
      out.words.push_back(std::move(e));
      out.enhanced.empty_nodes.push_back(remap(w.id));
      continue;
    }
    const int i = w.id.major;
    Word head_piece = w;
    head_piece.id = SurfaceNode(first[i]);
    if (w.basic_head) head_piece.basic_head = remap(*w.basic_head);
    if (pieces[i].size() == 1) {
      out.words.push_back(std::move(head_piece));
      continue;
    }
    head_piece.form = pieces[i][0];
    head_piece.misc = "_";
    out.mwt_ranges.push_back({first[i], last[i], w.form, w.misc});
    out.words.push_back(std::move(head_piece));
    for (size_t k = 1; k < pieces[i].size(); ++k) {
      Word piece;
      piece.id = SurfaceNode(first[i] + static_cast<int>(k));
      piece.form = pieces[i][k];
      piece.basic_head = SurfaceNode(first[i]);
      piece.basic_deprel = "dep";
      out.enhanced.edges.push_back({SurfaceNode(first[i]), piece.id, "dep"});
      out.words.push_back(std::move(piece));
    }
  }
  for (const MwtRange& r : sentence.mwt_ranges) {
    out.mwt_ranges.push_back({first[r.start], last[r.end], r.form, r.misc});
  }
  std::sort(out.mwt_ranges.begin(), out.mwt_ranges.end(),
            [](const MwtRange& a, const MwtRange& b) { return a.start < b.start; });
  for (const Edge& e : sentence.enhanced.edges) {
    out.enhanced.edges.push_back({remap(e.head), remap(e.dep), e.label});
  }
  out.enhanced.n = next_id;
  out.enhanced.Normalize();
  return out;
}

}  // namespace eud
