#pragma once

/** @file
 * Seeded Monte Carlo estimation of MSE and bias.
 *
 * Trial t of a run with seed s draws its noise from its own stream, a
 * SplitMix64 generator started at state mix64(s ^ mix64(t)) and fed through
 * std::normal_distribution<double>. The draws of a trial therefore depend
 * only on (s, t): runs with more trials extend runs with fewer, and trials
 * may be evaluated in any order.
 */

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "ssnm/core.hpp"
#include "ssnm/estimators.hpp"

namespace ssnm {

/// SplitMix64 finalizer (a bijection on 64-bit words).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// SplitMix64 as a UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    const std::uint64_t z = mix64(state_);
    state_ += 0x9e3779b97f4a7c15ULL;
    return z;
  }

 private:
  std::uint64_t state_;
};

/// Standard normal draws for one trial.
class TrialStream {
 public:
  TrialStream(std::uint64_t seed, std::uint64_t trial) : engine_(mix64(seed ^ mix64(trial))) {}

  double gaussian() { return normal_(engine_); }

 private:
  SplitMix64 engine_;
  std::normal_distribution<double> normal_;
};

struct McConfig {
  static constexpr std::int64_t kMinTrials = 100;

  McConfig(std::int64_t trials, std::uint64_t seed) : trials(trials), seed(seed) {
    if (trials < kMinTrials)
      throw InvalidArgument("Monte Carlo needs at least " + std::to_string(kMinTrials) +
                            " trials, got " + std::to_string(trials));
  }

  std::int64_t trials;
  std::uint64_t seed;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(trials)
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
};

using Estimator = std::function<Estimate(const Observation&)>;

/// y = x0 + sigma z with z drawn from @p stream.
inline Observation sample(const ParamVector& x0, const ModelConfig& model, TrialStream& stream) {
  require_admissible(x0, model);
  Observation y{x0.values()};
  for (Index k = 0; k < y.values.size(); ++k) y.values[k] += model.sigma() * stream.gaussian();
  return y;
}

/// Mean and standard error of @p xs (two-pass).
inline McEstimate summarize(const std::vector<double>& xs, std::uint64_t seed) {
  McEstimate est;
  est.trials = static_cast<std::int64_t>(xs.size());
  est.seed = seed;
  if (xs.empty()) return est;
  double sum = 0.0;
  for (double x : xs) sum += x;
  est.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - est.mean) * (x - est.mean);
    const double var = ss / static_cast<double>(xs.size() - 1);
    est.std_error = std::sqrt(var / static_cast<double>(xs.size()));
  }
  return est;
}

/**
 * Squared errors ||x_hat(y_t) - x0||^2 of every estimator on the same draws;
 * result[e][t] is estimator e on trial t.
 */
inline std::vector<std::vector<double>> squared_errors(const std::vector<Estimator>& estimators,
                                                       const ParamVector& x0,
                                                       const ModelConfig& model,
                                                       const McConfig& mc) {
  require_admissible(x0, model);
  std::vector<std::vector<double>> out(estimators.size(),
                                       std::vector<double>(static_cast<std::size_t>(mc.trials)));
  for (std::int64_t t = 0; t < mc.trials; ++t) {
    TrialStream stream(mc.seed, static_cast<std::uint64_t>(t));
    const Observation y = sample(x0, model, stream);
    for (std::size_t e = 0; e < estimators.size(); ++e)
      out[e][static_cast<std::size_t>(t)] = (estimators[e](y).values - x0.values()).squaredNorm();
  }
  return out;
}

inline std::vector<McEstimate> estimate_mse(const std::vector<Estimator>& estimators,
                                            const ParamVector& x0, const ModelConfig& model,
                                            const McConfig& mc) {
  const auto errors = squared_errors(estimators, x0, model, mc);
  std::vector<McEstimate> out;
  out.reserve(errors.size());
  for (const auto& e : errors) out.push_back(summarize(e, mc.seed));
  return out;
}

inline McEstimate estimate_mse(const Estimator& estimator, const ParamVector& x0,
                               const ModelConfig& model, const McConfig& mc) {
  return estimate_mse(std::vector<Estimator>{estimator}, x0, model, mc).front();
}

/// Componentwise bias E[x_hat(y)] - x_true with per-component standard errors.
inline std::vector<McEstimate> estimate_bias(const Estimator& estimator, const ParamVector& x_true,
                                             const ModelConfig& model, const McConfig& mc) {
  require_admissible(x_true, model);
  const auto n = static_cast<std::size_t>(model.n());
  std::vector<std::vector<double>> dev(n, std::vector<double>(static_cast<std::size_t>(mc.trials)));
  for (std::int64_t t = 0; t < mc.trials; ++t) {
    TrialStream stream(mc.seed, static_cast<std::uint64_t>(t));
    const Vector d = estimator(sample(x_true, model, stream)).values - x_true.values();
    for (std::size_t k = 0; k < n; ++k) dev[k][static_cast<std::size_t>(t)] = d[static_cast<Index>(k)];
  }
  std::vector<McEstimate> out;
  out.reserve(n);
  for (const auto& d : dev) out.push_back(summarize(d, mc.seed));
  return out;
}

}  // namespace ssnm
