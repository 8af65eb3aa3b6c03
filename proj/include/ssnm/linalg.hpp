#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>

#include "ssnm/core.hpp"

namespace ssnm {

/// Relative spectral cutoff used by pseudoinverse(): p * eps * 64.
inline double pseudoinverse_rtol(Index p) {
  return static_cast<double>(p) * std::numeric_limits<double>::epsilon() * 64.0;
}

/**
 * Moore-Penrose pseudoinverse of a symmetric matrix via its eigendecomposition.
 * Eigenvalues with |lambda| <= rtol * max|lambda| are treated as zero.
 */
inline Matrix pseudoinverse(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("pseudoinverse needs a square matrix");
  if (a.size() == 0) return a;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
  const Vector& lambda = eig.eigenvalues();
  const double cutoff = pseudoinverse_rtol(a.rows()) * lambda.cwiseAbs().maxCoeff();
  Vector inv(lambda.size());
  for (Index i = 0; i < lambda.size(); ++i)
    inv[i] = std::abs(lambda[i]) > cutoff ? 1.0 / lambda[i] : 0.0;
  const Matrix& u = eig.eigenvectors();
  return u * inv.asDiagonal() * u.transpose();
}

}  // namespace ssnm
