#pragma once

/** @file
 * MSE bounds for unbiased estimation in the sparse signal-in-noise model.
 *
 * Lower bounds: the Cramer-Rao bound, Hammersley-Chapman-Robbins bounds built
 * from explicit test points, and the closed-form t -> 0 limit of the HCRB for
 * the "replace the S-th largest entry" test points. Upper bound: the
 * constrained Barankin bound BB_c, the MSE at x0 of the optimal unbiased
 * estimator restricted by odd-symmetry and independence constraints.
 *
 * Every value satisfies crb <= hcrb_limit <= BB <= bb_c, where BB is the
 * (not computable) Barankin bound.
 */

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "ssnm/core.hpp"
#include "ssnm/linalg.hpp"
#include "ssnm/quadrature.hpp"

namespace ssnm {

enum class BoundKind { Crb, HcrbLimit, HcrbFinite, BbC };

inline std::string_view to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::Crb: return "CRB";
    case BoundKind::HcrbLimit: return "HCRB";
    case BoundKind::HcrbFinite: return "HCRB_t";
    case BoundKind::BbC: return "BB_c";
  }
  return "?";
}

struct BoundValue {
  double value;
  BoundKind kind;
  ParamVector anchor;
  double sigma;
};

/// Test points v_i (columns of V) anchored at x0, each with x0 + v_i in X_S.
class TestPointSet {
 public:
  TestPointSet(ParamVector anchor, Matrix points, Index sparsity)
      : anchor_(std::move(anchor)), v_(std::move(points)) {
    if (v_.cols() < 1) throw InvalidArgument("test point set needs at least one point");
    if (v_.rows() != anchor_.size())
      throw DimensionMismatch("test points have length " + std::to_string(v_.rows()) +
                              ", anchor has length " + std::to_string(anchor_.size()));
    for (Index i = 0; i < v_.cols(); ++i) {
      const Vector shifted = anchor_.values() + v_.col(i);
      if (static_cast<Index>(support(shifted).size()) > sparsity)
        throw SparsityViolation("test point " + std::to_string(i) +
                                " leaves X_S (anchor + v has more than " +
                                std::to_string(sparsity) + " nonzeros)");
    }
  }

  const ParamVector& anchor() const noexcept { return anchor_; }
  const Matrix& points() const noexcept { return v_; }
  Index count() const noexcept { return v_.cols(); }

 private:
  ParamVector anchor_;
  Matrix v_;
};

/// CRB: S sigma^2 when ||x0||_0 = S, N sigma^2 otherwise.
inline BoundValue crb(const ParamVector& x0, const ModelConfig& model) {
  require_admissible(x0, model);
  const Index dof = x0.sparsity() == model.s() ? model.s() : model.n();
  return {static_cast<double>(dof) * model.variance(), BoundKind::Crb, x0, model.sigma()};
}

/// Smallest magnitude over the support of x0.
inline double xi0(const ParamVector& x0) {
  if (x0.sparsity() == 0) throw DegenerateInput("xi0 is undefined for the zero vector");
  double m = std::numeric_limits<double>::infinity();
  for (Index k : x0.support()) m = std::min(m, std::abs(x0[k]));
  return m;
}

/**
 * Closed-form HCRB limit: S s2 + (N-S-1) s2 exp(-xi0^2/s2) when ||x0||_0 = S,
 * N s2 otherwise. For S = N there are no off-support test points and the
 * limit is S s2.
 */
inline BoundValue hcrb_limit(const ParamVector& x0, const ModelConfig& model) {
  require_admissible(x0, model);
  const double s2 = model.variance();
  const auto n = static_cast<double>(model.n());
  const auto s = static_cast<double>(model.s());
  double value = n * s2;
  if (x0.sparsity() == model.s()) {
    value = s * s2;
    if (model.n() > model.s()) {
      const double xi = xi0(x0);
      value += (n - s - 1.0) * s2 * std::exp(-(xi * xi) / s2);
    }
  }
  return {value, BoundKind::HcrbLimit, x0, model.sigma()};
}

/// Test points whose t -> 0 HCRB is the CRB: t e_i over supp(x0) if
/// ||x0||_0 = S, over all N coordinates otherwise.
inline TestPointSet build_test_points_crb(const ParamVector& x0, double t,
                                          const ModelConfig& model) {
  require_admissible(x0, model);
  if (!(t > 0.0)) throw InvalidArgument("test point step t must be positive");
  IndexSet dirs;
  if (x0.sparsity() == model.s()) {
    dirs = x0.support();
  } else {
    dirs.resize(static_cast<std::size_t>(model.n()));
    std::iota(dirs.begin(), dirs.end(), Index{0});
  }
  Matrix v = Matrix::Zero(model.n(), static_cast<Index>(dirs.size()));
  for (std::size_t j = 0; j < dirs.size(); ++j) v(dirs[j], static_cast<Index>(j)) = t;
  return {x0, std::move(v), model.s()};
}

/**
 * N test points: v_i = t e_i for i in supp(x0), and v_i = -x0^(S) e_k + t e_i
 * otherwise, where x0^(S) = x0[k] is the S-th largest entry in magnitude.
 * Zeroing entry k before adding entry i keeps every x0 + v_i in X_S.
 */
inline TestPointSet build_test_points_hcrb(const ParamVector& x0, double t,
                                           const ModelConfig& model) {
  require_admissible(x0, model);
  if (!(t > 0.0)) throw InvalidArgument("test point step t must be positive");
  const auto [xs, k] = s_largest_magnitude(x0, model.s());
  Matrix v = Matrix::Zero(model.n(), model.n());
  for (Index i = 0; i < model.n(); ++i) {
    if (!x0.in_support(i)) v(k, i) = -xs;
    v(i, i) += t;
  }
  return {x0, std::move(v), model.s()};
}

/// Exponent guard for exp(v_i^T v_j / sigma^2).
inline constexpr double kGramExponentLimit = 700.0;

/// J_ij = exp(v_i^T v_j / sigma^2) - 1.
inline Matrix gram_matrix(const TestPointSet& points, double sigma) {
  const Matrix& v = points.points();
  const Matrix g = (v.transpose() * v) / (sigma * sigma);
  const double worst = g.maxCoeff();
  if (worst > kGramExponentLimit)
    throw NumericalOverflow("exp(" + std::to_string(worst) +
                            ") overflows the HCRB Gram matrix; use hcrb_limit");
  return g.unaryExpr([](double e) { return std::expm1(e); });
}

/**
 * HCRB Tr(V J^+ V^T) for an explicit test-point set.
 *
 * J is rescaled to unit diagonal first (J = D K D, W = V D^-1) and the bound
 * is evaluated as Tr(W K^+ W^T). The bound is the supremum over
 * combinations a of (u^T V a)^2 / (a^T J a), which does not change under
 * a -> D^-1 b, while K's spectrum is far narrower than J's.
 */
inline BoundValue hcrb_finite(const ParamVector& x0, const TestPointSet& points, double sigma) {
  if (!(points.anchor() == x0)) throw AnchorMismatch("test points are anchored at a different x0");
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  const Matrix j = gram_matrix(points, sigma);
  Vector scale = j.diagonal();
  for (Index i = 0; i < scale.size(); ++i) scale[i] = scale[i] > 0.0 ? std::sqrt(scale[i]) : 1.0;
  const Matrix k = scale.cwiseInverse().asDiagonal() * j * scale.cwiseInverse().asDiagonal();
  const Matrix w = points.points() * scale.cwiseInverse().asDiagonal();
  const Matrix k_pinv = pseudoinverse(k);
  // Tr(W K^+ W^T) = sum_ij (K^+)_ij (W^T W)_ij
  const double value = (k_pinv.cwiseProduct(w.transpose() * w)).sum();
  return {std::max(value, 0.0), BoundKind::HcrbFinite, x0, sigma};
}

/**
 * g(x; s2) = E[tanh(x y / s2)] for y ~ N(x, s2), evaluated as
 *   int_0^inf [phi(y - x) - phi(y + x)] tanh(y x / s2) dy
 * where phi is the N(0, s2) density. The difference of densities is formed
 * as phi(y - x) * (1 - exp(-2 y x / s2)), so no sinh of a large argument
 * appears. For |x| >= sigma the complement 1 - g is integrated instead.
 * Integration runs over [0, |x| + 12 sigma]; the result is kept inside [0, 1).
 */
inline double g_quadrature(double x, double sigma2, double rel_tol = 1e-10) {
  if (!(sigma2 > 0.0)) throw InvalidArgument("sigma2 must be positive");
  const double a = std::abs(x);
  if (a == 0.0) return 0.0;
  const double sigma = std::sqrt(sigma2);
  const double norm = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
  const double upper = a + 12.0 * sigma;
  quad::QuadOptions opt;
  opt.rel_tol = rel_tol;
  opt.max_panels = 10000;
  opt.initial_panels = static_cast<int>(std::clamp(std::ceil(upper / sigma), 1.0, 2000.0));
  double g;
  if (a < sigma) {
    // Folded onto y >= 0; expm1 keeps the small-x product accurate.
    auto integrand = [=](double y) {
      const double u = y - a;
      const double r = y * a / sigma2;
      return norm * std::exp(-0.5 * u * u / sigma2) * -std::expm1(-2.0 * r) * std::tanh(r);
    };
    g = quad::integrate(integrand, 0.0, upper, opt).value;
  } else {
    // Near 1 integrate the complement instead so g stays monotone to the
    // last ulp: 1 - g = 2 int_0^inf phi(y - x) (1 - tanh(x y / s2)) dy, and
    // phi(y - x) (1 - tanh r) = 2 phi(y + x) / (1 + exp(-2 r)).
    auto integrand = [=](double y) {
      const double v = y + a;
      return 4.0 * norm * std::exp(-0.5 * v * v / sigma2) / (1.0 + std::exp(-2.0 * y * a / sigma2));
    };
    g = 1.0 - quad::integrate(integrand, 0.0, upper, opt).value;
  }
  return std::clamp(g, 0.0, std::nextafter(1.0, 0.0));
}

/**
 * BB_c = S s2 + (N - S) s2 [1 - prod_{l in supp x0} g(x0_l; s2)] when
 * ||x0||_0 = S; N s2 when ||x0||_0 < S, where the upper and lower bounds
 * coincide.
 */
inline BoundValue bb_c(const ParamVector& x0, const ModelConfig& model) {
  require_admissible(x0, model);
  const double s2 = model.variance();
  if (x0.sparsity() < model.s())
    return {static_cast<double>(model.n()) * s2, BoundKind::BbC, x0, model.sigma()};
  double prod = 1.0;
  for (Index l : x0.support()) prod *= g_quadrature(x0[l], s2, 1e-10);
  const double value = static_cast<double>(model.s()) * s2 +
                       static_cast<double>(model.n() - model.s()) * s2 * (1.0 - prod);
  return {value, BoundKind::BbC, x0, model.sigma()};
}

}  // namespace ssnm
