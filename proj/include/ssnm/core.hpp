#pragma once

/** @file
 * Domain types of the sparse signal-in-noise model y = x0 + n, where x0 has
 * at most S nonzero entries and n is white Gaussian noise of variance sigma^2.
 */

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ssnm/error.hpp"

namespace ssnm {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using IndexSet = std::vector<Index>;

/// Ambient dimension N, sparsity S and noise standard deviation sigma.
class ModelConfig {
 public:
  ModelConfig(Index n, Index s, double sigma) : n_(n), s_(s), sigma_(sigma) {
    if (n < 1) throw InvalidArgument("N must be positive, got " + std::to_string(n));
    if (s < 1 || s > n)
      throw InvalidArgument("S must satisfy 1 <= S <= N, got S=" + std::to_string(s) +
                            " N=" + std::to_string(n));
    if (!(sigma > 0.0) || !std::isfinite(sigma))
      throw InvalidArgument("sigma must be positive and finite");
  }

  Index n() const noexcept { return n_; }
  Index s() const noexcept { return s_; }
  double sigma() const noexcept { return sigma_; }
  double variance() const noexcept { return sigma_ * sigma_; }

  ModelConfig with_sigma(double sigma) const { return {n_, s_, sigma}; }

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;

 private:
  Index n_;
  Index s_;
  double sigma_;
};

/**
 * Indices of the nonzero entries of @p x, ascending.
 *
 * Entries with |x_k| <= zero_tol are treated as zero. The default tolerance
 * of 0 is an exact test, which is what parameter vectors need; a positive
 * tolerance is only meant for vectors that come out of floating-point
 * pipelines. When @p max_sparsity is given, a support larger than it throws
 * SparsityViolation.
 */
inline IndexSet support(const Vector& x, std::optional<Index> max_sparsity = std::nullopt,
                        double zero_tol = 0.0) {
  IndexSet idx;
  for (Index k = 0; k < x.size(); ++k)
    if (std::abs(x[k]) > zero_tol) idx.push_back(k);
  if (max_sparsity && static_cast<Index>(idx.size()) > *max_sparsity)
    throw SparsityViolation("vector has " + std::to_string(idx.size()) +
                            " nonzero entries, sparsity limit is " +
                            std::to_string(*max_sparsity));
  return idx;
}

/// A parameter vector together with its (exact) support.
class ParamVector {
 public:
  ParamVector() = default;
  explicit ParamVector(Vector values) : values_(std::move(values)), support_(ssnm::support(values_)) {}
  ParamVector(std::initializer_list<double> values)
      : ParamVector(Vector(Eigen::Map<const Vector>(values.begin(), static_cast<Index>(values.size())))) {}

  const Vector& values() const noexcept { return values_; }
  const IndexSet& support() const noexcept { return support_; }
  Index size() const noexcept { return values_.size(); }
  Index sparsity() const noexcept { return static_cast<Index>(support_.size()); }
  double operator[](Index k) const { return values_[k]; }

  bool in_support(Index k) const {
    return std::binary_search(support_.begin(), support_.end(), k);
  }

  friend bool operator==(const ParamVector& a, const ParamVector& b) {
    return a.values_.size() == b.values_.size() && a.values_ == b.values_;
  }

 private:
  Vector values_;
  IndexSet support_;
};

/// Throws unless @p x0 has length N and lies in X_S.
inline void require_admissible(const ParamVector& x0, const ModelConfig& model) {
  if (x0.size() != model.n())
    throw DimensionMismatch("parameter has length " + std::to_string(x0.size()) +
                            ", model has N=" + std::to_string(model.n()));
  if (x0.sparsity() > model.s())
    throw SparsityViolation("parameter has " + std::to_string(x0.sparsity()) +
                            " nonzero entries, S=" + std::to_string(model.s()));
}

/// Observation y (length N after any dictionary reduction).
struct Observation {
  Vector values;
};

/// SNR ||x0||^2 / (N sigma^2) in dB. The zero vector yields -infinity.
inline double snr_db(const ParamVector& x0, const ModelConfig& model) {
  const double energy = x0.values().squaredNorm();
  if (energy == 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(energy / (static_cast<double>(model.n()) * model.variance()));
}

struct RankedEntry {
  double value;  // signed entry
  Index index;
};

/**
 * The S-th largest entry of @p x0 in magnitude, with its index.
 *
 * Entries are ordered by decreasing magnitude, ties by increasing index. If
 * x0 has fewer than S nonzeros the result has value 0 and the index of the
 * zero entry in that position.
 */
inline RankedEntry s_largest_magnitude(const ParamVector& x0, Index s) {
  if (s < 1 || s > x0.size())
    throw InvalidArgument("rank S=" + std::to_string(s) + " out of range for length " +
                          std::to_string(x0.size()));
  std::vector<Index> order(static_cast<std::size_t>(x0.size()));
  std::iota(order.begin(), order.end(), Index{0});
  const Vector& v = x0.values();
  auto by_magnitude = [&v](Index a, Index b) {
    const double ma = std::abs(v[a]), mb = std::abs(v[b]);
    return ma > mb || (ma == mb && a < b);
  };
  std::nth_element(order.begin(), order.begin() + (s - 1), order.end(), by_magnitude);
  const Index k = order[static_cast<std::size_t>(s - 1)];
  return {v[k], k};
}

/// M x N matrix H with orthonormal columns (H^T H = I_N).
class OrthonormalDictionary {
 public:
  static constexpr double kTolerance = 1e-10;

  explicit OrthonormalDictionary(Matrix h) : h_(std::move(h)) {
    if (h_.cols() < 1 || h_.rows() < h_.cols())
      throw DimensionMismatch("dictionary must be M x N with M >= N >= 1");
    const Matrix gram = h_.transpose() * h_;
    const double dev = (gram - Matrix::Identity(h_.cols(), h_.cols())).cwiseAbs().maxCoeff();
    if (dev > kTolerance)
      throw InvalidArgument("dictionary columns are not orthonormal (max |H^T H - I| = " +
                            std::to_string(dev) + ")");
  }

  const Matrix& matrix() const noexcept { return h_; }
  Index rows() const noexcept { return h_.rows(); }
  Index cols() const noexcept { return h_.cols(); }

 private:
  Matrix h_;
};

/// Reduces y = H x0 + n to the length-N model z = H^T y = x0 + H^T n.
inline Observation reduce_orthonormal(const Vector& y_raw, const OrthonormalDictionary& h) {
  if (y_raw.size() != h.rows())
    throw DimensionMismatch("observation has length " + std::to_string(y_raw.size()) +
                            ", dictionary has M=" + std::to_string(h.rows()));
  return {h.matrix().transpose() * y_raw};
}

}  // namespace ssnm
