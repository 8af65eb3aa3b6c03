#pragma once

/** @file
 * Estimators for the sparse signal-in-noise model. None of the outputs is
 * constrained to be S-sparse unless the estimator itself sparsifies.
 */

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "ssnm/core.hpp"

namespace ssnm {

struct Estimate {
  Vector values;
};

/// Least squares: x_hat = y.
inline Estimate ls(const Observation& y) { return {y.values}; }

/// Keeps the S largest-magnitude entries of y (ties to the lower index).
inline Estimate ml(const Observation& y, Index s) {
  const Index n = y.values.size();
  if (s < 1 || s > n)
    throw InvalidArgument("ML needs 1 <= S <= N, got S=" + std::to_string(s));
  if (s == n) return {y.values};
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  const Vector& v = y.values;
  std::nth_element(order.begin(), order.begin() + (s - 1), order.end(), [&v](Index a, Index b) {
    const double ma = std::abs(v[a]), mb = std::abs(v[b]);
    return ma > mb || (ma == mb && a < b);
  });
  Estimate out{Vector::Zero(n)};
  for (Index j = 0; j < s; ++j) {
    const Index k = order[static_cast<std::size_t>(j)];
    out.values[k] = v[k];
  }
  return out;
}

/// Hard thresholding: keeps y_k when |y_k| >= T.
inline Estimate ht(const Observation& y, double threshold) {
  if (!(threshold >= 0.0)) throw InvalidArgument("threshold must be nonnegative");
  Estimate out{y.values};
  for (Index k = 0; k < out.values.size(); ++k)
    if (std::abs(out.values[k]) < threshold) out.values[k] = 0.0;
  return out;
}

/// Universal threshold sigma * sqrt(2 ln N).
inline double universal_threshold(const ModelConfig& model) {
  return model.sigma() * std::sqrt(2.0 * std::log(static_cast<double>(model.n())));
}

inline Estimate ht(const Observation& y, const ModelConfig& model) {
  return ht(y, universal_threshold(model));
}

/**
 * Genie-aided unbiased estimator built from knowledge of x0 (||x0||_0 = S).
 *
 * On the support it is LS. Off the support,
 *   x_hat_k = y_k [1 - prod_{l in supp x0} tanh(y_l x0_l / sigma^2)],
 * applied to all of R^N; the correction is odd in y_k and in each y_l of the
 * support and ignores every other coordinate. Its MSE at x0 is BB_c(x0).
 */
class ConstrainedOracle {
 public:
  ConstrainedOracle(ParamVector x0, const ModelConfig& model)
      : x0_(std::move(x0)), inv_var_(1.0 / model.variance()) {
    if (x0_.size() != model.n())
      throw OracleMismatch("x0 has length " + std::to_string(x0_.size()) + ", N=" +
                           std::to_string(model.n()));
    if (x0_.sparsity() != model.s())
      throw OracleMismatch("the constrained oracle needs ||x0||_0 = S; got " +
                           std::to_string(x0_.sparsity()) + " nonzeros with S=" +
                           std::to_string(model.s()));
  }

  Estimate operator()(const Observation& y) const {
    if (y.values.size() != x0_.size())
      throw DimensionMismatch("observation length does not match x0");
    double prod = 1.0;
    for (Index l : x0_.support()) prod *= std::tanh(y.values[l] * x0_[l] * inv_var_);
    Estimate out{y.values};
    const double shrink = 1.0 - prod;
    for (Index k = 0; k < out.values.size(); ++k)
      if (!x0_.in_support(k)) out.values[k] *= shrink;
    return out;
  }

  const ParamVector& anchor() const noexcept { return x0_; }

 private:
  ParamVector x0_;
  double inv_var_;
};

inline Estimate constrained_oracle(const Observation& y, const ParamVector& x0,
                                   const ModelConfig& model) {
  return ConstrainedOracle(x0, model)(y);
}

}  // namespace ssnm
