#include "eud/optimizer.h"

#include <cmath>

namespace eud {

void RAdam::Step(ModelParams& params, const ModelParams& grad) {
  std::vector<double> values = Flatten(params);
  const std::vector<double> g = Flatten(grad);
  if (first_moment_.empty()) {
    first_moment_.assign(values.size(), 0.0);
    second_moment_.assign(values.size(), 0.0);
  }
  ++step_;
  const double b1 = options_.beta1;
  const double b2 = options_.beta2;
  const double t = step_;
  const double b1_t = std::pow(b1, t);
  const double b2_t = std::pow(b2, t);
  const double rho_inf = 2.0 / (1.0 - b2) - 1.0;
  const double rho_t = rho_inf - 2.0 * t * b2_t / (1.0 - b2_t);
  // Variance rectification applies once the approximated SMA length
  // exceeds 5; before that the step is bias-corrected momentum.
  const bool rectify = rho_t > 5.0;
  double rect = 0.0;
  if (rectify) {
    rect = std::sqrt((rho_t - 4.0) * (rho_t - 2.0) * rho_inf /
                     ((rho_inf - 4.0) * (rho_inf - 2.0) * rho_t));
  }
  const double lr = options_.learning_rate;
  for (size_t k = 0; k < values.size(); ++k) {
    if (options_.weight_decay > 0.0) values[k] -= lr * options_.weight_decay * values[k];
    first_moment_[k] = b1 * first_moment_[k] + (1.0 - b1) * g[k];
    second_moment_[k] = b2 * second_moment_[k] + (1.0 - b2) * g[k] * g[k];
    const double m_hat = first_moment_[k] / (1.0 - b1_t);
    if (rectify) {
      const double v_hat = std::sqrt(second_moment_[k] / (1.0 - b2_t));
      values[k] -= lr * rect * m_hat / (v_hat + options_.epsilon);
    } else {
      values[k] -= lr * m_hat;
    }
  }
  Unflatten(values, params);
}

double ClipGradientNorm(ModelParams& grad, double max_norm) {
  double sum = 0.0;
  ForEachBlock(grad, [&](const std::string&, const double* data, Eigen::Index count) {
    for (Eigen::Index k = 0; k < count; ++k) sum += data[k] * data[k];
  });
  const double norm = std::sqrt(sum);
  if (max_norm > 0.0 && norm > max_norm) {
    const double scale = max_norm / norm;
    ForEachBlock(grad, [&](const std::string&, double* data, Eigen::Index count) {
      for (Eigen::Index k = 0; k < count; ++k) data[k] *= scale;
    });
  }
  return norm;
}

}  // namespace eud
