// Finite-difference check of ScoreModel::Loss on small random instances.

#ifndef EUD_TESTS_SUPPORT_GRADCHECK_H_
#define EUD_TESTS_SUPPORT_GRADCHECK_H_

#include <cstdint>
#include <string>

#include "eud/scorer.h"

namespace eud::testing {

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_block;  // parameter block holding the worst coordinate
  size_t parameters = 0;
  double loss = 0.0;
};

// Random model (d = 8, h = 4), random sentence of 2..4 words (one unknown to
// the vocabulary) and random targets with extra edges, for either mode.
// Relative error per coordinate is |a - n| / max(|a|, |n|, floor).
GradCheckResult RunGradientCheck(uint64_t seed, ParserMode mode, double step = 1e-5,
                                 double floor = 1e-5);

}  // namespace eud::testing

#endif  // EUD_TESTS_SUPPORT_GRADCHECK_H_
