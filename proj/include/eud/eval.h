// ELAS / EULAS scoring over enhanced graphs with gold word segmentation.

#ifndef EUD_EVAL_H_
#define EUD_EVAL_H_

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "eud/graph.h"

namespace eud {

struct EvalResult {
  long gold_edges = 0;
  long system_edges = 0;
  long matched = 0;

  double precision() const;
  double recall() const;
  double f1() const;
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Micro-averaged F1 over (head, dep, label) after collapsing empty nodes and
// splitting merged labels on both sides. `ids` optionally names sentences in
// error messages.
EvalResult Elas(const std::vector<EnhancedGraph>& gold,
                const std::vector<EnhancedGraph>& system,
                const std::vector<std::string>& ids = {});

// As Elas, comparing each path component of a label only up to its first ':'.
// Each exact triple counts once, so edge totals equal the ELAS totals and
// EULAS >= ELAS.
EvalResult Eulas(const std::vector<EnhancedGraph>& gold,
                 const std::vector<EnhancedGraph>& system,
                 const std::vector<std::string>& ids = {});

// "nmod:in>obj:x" -> "nmod>obj".
std::string UniversalLabel(const std::string& label);

// Unweighted mean; throws std::invalid_argument on empty input.
double MacroAverage(const std::vector<double>& scores);

// ELAS_P=... lines, values as percentages with two decimals.
void WriteMetric(std::ostream& out, const std::string& prefix,
                 const EvalResult& result);

}  // namespace eud

#endif  // EUD_EVAL_H_
