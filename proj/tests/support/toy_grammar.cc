#include "support/toy_grammar.h"

#include <array>
#include <random>
#include <string>

namespace eud::testing {

namespace {

constexpr std::array kNouns = {"dog", "cat", "bird", "man", "woman", "child",
                               "book", "car", "house", "park", "river", "table"};
constexpr std::array kTransitive = {"saw", "liked", "chased", "found", "took", "washed"};
constexpr std::array kIntransitive = {"slept", "ran", "left", "smiled", "waited"};
constexpr std::array kControl = {"wanted", "tried", "hoped"};
constexpr std::array kPreps = {"in", "on", "with", "near"};
constexpr std::array kDets = {"the", "a"};
constexpr std::array kConj = {"and", "or"};

class Builder {
 public:
  Builder(const ToyOptions& options, std::mt19937_64& rng) : o_(options), rng_(rng) {}

  Sentence Build() {
    int subject = NounPhrase(0, true);
    int verb = VerbPhrase(subject);
    Attach(verb, 0, "root", "root");
    if (Chance(o_.vp_coord)) {
      int cc = Add(Pick(kConj), "CCONJ");
      int second = VerbPhrase(subject);
      Attach(cc, second, "cc", "cc");
      Attach(second, verb, "conj", "conj:" + s_.words[cc - 1].form);
      Extra(second, subject, "nsubj");
    }
    int punct = Add(".", "PUNCT");
    Attach(punct, verb, "punct", "punct");
    s_.enhanced.n = static_cast<int>(s_.words.size());
    s_.enhanced.Normalize();
    return std::move(s_);
  }

 private:
  template <size_t N>
  std::string Pick(const std::array<const char*, N>& items) {
    return items[std::uniform_int_distribution<size_t>(0, N - 1)(rng_)];
  }
  bool Chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  std::string Obj() const { return o_.dialect_b ? "dobj" : "obj"; }
  std::string Obl() const { return o_.dialect_b ? "nmod" : "obl"; }

  int Add(const std::string& form, const std::string& upos) {
    Word w;
    w.id = SurfaceNode(static_cast<int>(s_.words.size()) + 1);
    w.form = form;
    w.lemma = form;
    w.upos = upos;
    s_.words.push_back(std::move(w));
    return static_cast<int>(s_.words.size());
  }

  void Attach(int dep, int head, const std::string& basic, const std::string& enhanced) {
    Word& w = s_.words[dep - 1];
    w.basic_head = SurfaceNode(head);
    w.basic_deprel = basic;
    if (!enhanced.empty()) Extra(head, dep, enhanced);
  }

  void Extra(int head, int dep, const std::string& label) {
    s_.enhanced.edges.push_back({SurfaceNode(head), SurfaceNode(dep), label});
  }

  int SimpleNounPhrase() {
    int det = Add(Pick(kDets), "DET");
    int noun = Add(Pick(kNouns), "NOUN");
    Attach(det, noun, "det", "det");
    return noun;
  }

  // Returns the head noun; `subject` only affects relative-clause odds.
  int NounPhrase(int depth, bool subject) {
    int noun = SimpleNounPhrase();
    if (depth == 0 && Chance(o_.pp)) {
      int prep = Add(Pick(kPreps), "ADP");
      int inner = SimpleNounPhrase();
      Attach(prep, inner, "case", "case");
      Attach(inner, noun, "nmod", "nmod:" + s_.words[prep - 1].form);
    }
    if (depth == 0 && subject && Chance(o_.relcl)) RelativeClause(noun);
    return noun;
  }

  void RelativeClause(int noun) {
    int that = Add("that", "PRON");
    int verb;
    if (Chance(o_.subject_gap)) {
      verb = Add(Pick(kTransitive), "VERB");
      int object = NounPhrase(1, false);
      Attach(object, verb, Obj(), Obj());
      Attach(that, verb, "nsubj", "");
      Extra(verb, noun, "nsubj");
    } else {
      int subject = NounPhrase(1, false);
      verb = Add(Pick(kTransitive), "VERB");
      Attach(subject, verb, "nsubj", "nsubj");
      Attach(that, verb, Obj(), "");
      Extra(verb, noun, Obj());
    }
    Attach(verb, noun, "acl:relcl", "acl:relcl");
    Extra(noun, that, "ref");
  }

  void Objects(int verb) {
    int object = NounPhrase(0, false);
    Attach(object, verb, Obj(), Obj());
    if (Chance(o_.np_coord)) {
      int cc = Add(Pick(kConj), "CCONJ");
      int second = SimpleNounPhrase();
      Attach(cc, second, "cc", "cc");
      Attach(second, object, "conj", "conj:" + s_.words[cc - 1].form);
      Extra(verb, second, Obj());
    }
  }

  void Oblique(int verb) {
    int prep = Add(Pick(kPreps), "ADP");
    int noun = SimpleNounPhrase();
    Attach(prep, noun, "case", "case");
    Attach(noun, verb, Obl(), Obl() + ":" + s_.words[prep - 1].form);
  }

  int VerbPhrase(int subject) {
    int verb;
    if (Chance(o_.control)) {
      verb = Add(Pick(kControl), "VERB");
      int to = Add("to", "PART");
      const bool transitive = Chance(0.5);
      int inner = Add(transitive ? Pick(kTransitive) : Pick(kIntransitive), "VERB");
      Attach(to, inner, "mark", "mark");
      Attach(inner, verb, "xcomp", "xcomp");
      Extra(inner, subject, "nsubj");
      if (transitive) Objects(inner);
    } else if (Chance(0.6)) {
      verb = Add(Pick(kTransitive), "VERB");
      Objects(verb);
    } else {
      verb = Add(Pick(kIntransitive), "VERB");
    }
    if (Chance(o_.obl)) Oblique(verb);
    Attach(subject, verb, "nsubj", "nsubj");
    return verb;
  }

  const ToyOptions& o_;
  std::mt19937_64& rng_;
  Sentence s_;
};

}  // namespace

std::vector<Sentence> GenerateToyCorpus(int count, const ToyOptions& options,
                                        uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Sentence> out;
  for (int k = 0; k < count; ++k) {
    Sentence s = Builder(options, rng).Build();
    s.comments.push_back("# sent_id = toy-" + std::to_string(seed) + "-" + std::to_string(k + 1));
    out.push_back(std::move(s));
  }
  return out;
}

ToyOptions SimpleRegime() {
  ToyOptions o;
  o.relcl = 0.0;
  return o;
}

ToyOptions RelativeClauseRegime() {
  ToyOptions o;
  o.relcl = 1.0;
  return o;
}

}  // namespace eud::testing
