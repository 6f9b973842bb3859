// Synthetic English-like corpus with controlled multi-head constructions:
// relative clauses (ref + a cyclic extra edge), coordination with propagated
// subjects and objects, and subject control. Lemma = form, so lexicons built
// from a corpus cover it completely.

#ifndef EUD_TESTS_SUPPORT_TOY_GRAMMAR_H_
#define EUD_TESTS_SUPPORT_TOY_GRAMMAR_H_

#include <cstdint>
#include <vector>

#include "eud/conllu.h"

namespace eud::testing {

struct ToyOptions {
  double relcl = 0.3;      // per noun phrase at depth 0
  double subject_gap = 0.5;  // share of relative clauses that are subject-gapped
  double pp = 0.3;         // noun-attached prepositional phrase
  double obl = 0.3;        // verb-attached prepositional phrase
  double control = 0.2;    // "wanted to VERB"
  double vp_coord = 0.25;  // "VERB ... and VERB ..."
  double np_coord = 0.15;  // coordinated objects
  // Second dialect: obj -> dobj and obl:P -> nmod:P, same words otherwise.
  bool dialect_b = false;
};

std::vector<Sentence> GenerateToyCorpus(int count, const ToyOptions& options,
                                        uint64_t seed);

// Corpus with no relative clauses and one where every subject has one.
ToyOptions SimpleRegime();
ToyOptions RelativeClauseRegime();

}  // namespace eud::testing

#endif  // EUD_TESTS_SUPPORT_TOY_GRAMMAR_H_
