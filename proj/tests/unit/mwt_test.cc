#include "eud/mwt.h"

#include <sstream>

#include "doctest.h"
#include "eud/conllu.h"

namespace eud {
namespace {

MwtLexicon Spanish() {
  MwtLexicon lex;
  lex.Add("del", {"de", "el"}, 5);
  lex.Add("al", {"a", "el"}, 3);
  lex.Add("al", {"al", "x"}, 2);
  return lex;
}

std::vector<SplitRule> Rules(const std::string& text) {
  std::istringstream in(text);
  return ParseSplitRules(in);
}

TEST_CASE("lexicon keeps the modal split") {
  MwtLexicon lex = Spanish();
  CHECK(lex.LookupExact("del")->words == std::vector<std::string>{"de", "el"});
  CHECK(lex.LookupExact("del")->count == 5);
  CHECK(lex.LookupExact("al")->words == std::vector<std::string>{"a", "el"});
  CHECK_FALSE(lex.LookupExact("casa").has_value());
  MwtLexicon tie;
  tie.Add("zz", {"z", "b"});
  tie.Add("zz", {"z", "a"});
  CHECK(tie.LookupExact("zz")->words == std::vector<std::string>{"z", "a"});
}

TEST_CASE("lexicon built from gold MWTs and its file format") {
  std::vector<Sentence> sample = ReadConlluFile(EUD_TEST_DATA "/en_sample.conllu");
  MwtLexicon lex = MwtLexicon::Build(sample);
  CHECK(lex.LookupExact("cannot")->words == std::vector<std::string>{"can", "not"});
  CHECK(lex.LookupExact("gonna")->words == std::vector<std::string>{"gon", "na"});
  CHECK_FALSE(lex.LookupExact("dog").has_value());
  std::stringstream buffer;
  lex.Save(buffer);
  CHECK(buffer.str() == "cannot\tcan not\t1\ngonna\tgon na\t1\n");
  MwtLexicon loaded = MwtLexicon::Load(buffer);
  CHECK(loaded.LookupExact("gonna")->words == lex.LookupExact("gonna")->words);
  std::istringstream bad("x\ty\t1\n");
  CHECK_THROWS(MwtLexicon::Load(bad));
}

TEST_CASE("expansion decisions and splits") {
  MwtLexicon lex = Spanish();
  std::vector<SplitRule> rules = Rules("suffix\t's\t's\t1\n");
  CHECK(ShouldExpand("del", lex, rules));
  CHECK(ShouldExpand("Del", lex, rules));
  CHECK_FALSE(ShouldExpand("casa", lex, rules));
  CHECK(ShouldExpand("John's", MwtLexicon{}, rules));
  CHECK(Expand("del", lex, rules) == std::vector<std::string>{"de", "el"});
  CHECK(Expand("Del", lex, rules) == std::vector<std::string>{"De", "el"});
  CHECK(Expand("John's", lex, rules) == std::vector<std::string>{"John", "'s"});
  CHECK(Expand("casa", lex, {}) == std::vector<std::string>{"casa"});
  CHECK(Expand("'s", lex, rules) == std::vector<std::string>{"'s"});
}

TEST_CASE("rules apply repeatedly, first match first") {
  std::vector<SplitRule> rules = Rules(
      "# clitics\n"
      "suffix\tlo\tlo\t2\n"
      "suffix\tse\tse\t2\n"
      "prefix\tl'\tle\t1\n");
  CHECK(Expand("dárselo", MwtLexicon{}, rules) ==
        std::vector<std::string>{"dár", "se", "lo"});
  CHECK(Expand("l'homme", MwtLexicon{}, rules) == std::vector<std::string>{"le", "homme"});
  CHECK(Expand("selo", MwtLexicon{}, rules) == std::vector<std::string>{"se", "lo"});
}

TEST_CASE("rule file errors") {
  CHECK_THROWS(Rules("infix\ta\tb\t1\n"));
  CHECK_THROWS(Rules("suffix\t\tb\t1\n"));
  CHECK_THROWS(Rules("suffix\ta\tb\n"));
  CHECK_THROWS(Rules("suffix\ta\tb\t-1\n"));
}

TEST_CASE("segmentation score against gold tokens") {
  std::vector<Sentence> sample = ReadConlluFile(EUD_TEST_DATA "/en_sample.conllu");
  WordSegmentationScore perfect = ScoreExpansion(sample, MwtLexicon::Build(sample), {});
  CHECK(perfect.f1() == 1.0);
  WordSegmentationScore none = ScoreExpansion(sample, MwtLexicon{}, {});
  CHECK(none.recall() < 1.0);
  CHECK(none.gold_words - none.matched == 4);
}

TEST_CASE("sentence expansion renumbers words and keeps the graph consistent") {
  const char text[] =
      "1\tvoy\tir\tVERB\t_\t_\t0\troot\t0:root\t_\n"
      "2\tdel\tdel\tADP\t_\t_\t3\tcase\t3:case\t_\n"
      "3\tparque\tparque\tNOUN\t_\t_\t1\tobl\t1:obl:del\t_\n\n";
  Sentence s = ParseConllu(text)[0];
  Sentence x = ExpandSentence(s, Spanish(), {});
  CHECK(x.size() == 4);
  REQUIRE(x.mwt_ranges.size() == 1);
  CHECK(x.mwt_ranges[0].start == 2);
  CHECK(x.mwt_ranges[0].end == 3);
  CHECK(x.word(2).form == "de");
  CHECK(x.word(3).form == "el");
  CHECK(x.word(3).basic_head == SurfaceNode(2));
  CHECK(x.word(4).basic_head == SurfaceNode(1));
  CHECK(x.word(2).basic_head == SurfaceNode(4));
  // Serializes and re-parses as valid CoNLL-U.
  CHECK(ParseConllu(SerializeConllu({x})).size() == 1);
  CHECK(SerializeConllu({x}).find("2-3\tdel") != std::string::npos);
}

}  // namespace
}  // namespace eud
