// RAdam update rule and global-norm gradient clipping over ModelParams.

#ifndef EUD_OPTIMIZER_H_
#define EUD_OPTIMIZER_H_

#include <vector>

#include "eud/scorer.h"

namespace eud {

struct RAdamOptions {
  double learning_rate = 2e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.0;
};

class RAdam {
 public:
  explicit RAdam(RAdamOptions options) : options_(options) {}

  void Step(ModelParams& params, const ModelParams& grad);
  int steps() const { return step_; }
  const RAdamOptions& options() const { return options_; }

 private:
  RAdamOptions options_;
  int step_ = 0;
  std::vector<double> first_moment_;
  std::vector<double> second_moment_;
};

// Rescales grad in place so its L2 norm is at most max_norm. Returns the
// norm before clipping.
double ClipGradientNorm(ModelParams& grad, double max_norm);

}  // namespace eud

#endif  // EUD_OPTIMIZER_H_
