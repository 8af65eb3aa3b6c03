#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ssnm/estimators.hpp"

using namespace ssnm;

namespace {

Observation obs(std::initializer_list<double> v) {
  return {Eigen::Map<const Vector>(v.begin(), static_cast<Index>(v.size()))};
}

Vector random_vector(Index n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  Vector v(n);
  for (Index k = 0; k < n; ++k) v[k] = nd(rng);
  return v;
}

Matrix random_permutation(Index n, std::mt19937_64& rng) {
  Eigen::PermutationMatrix<Eigen::Dynamic> p(n);
  p.setIdentity();
  std::shuffle(p.indices().data(), p.indices().data() + n, rng);
  return p.toDenseMatrix().cast<double>();
}

const ModelConfig kFig1(10, 4, 1.0);

}  // namespace

TEST(Ls, Identity) {
  EXPECT_EQ(ls(obs({0, 0, 0})).values, Vector::Zero(3));
  const auto y = obs({1.5, -2, 0.25});
  EXPECT_EQ(ls(y).values, y.values);
}

TEST(Ml, Examples) {
  EXPECT_EQ(ml(obs({3, -2, 1, 0.5}), 2).values, obs({3, -2, 0, 0}).values);
  const auto y = obs({0, 4, 0, -3, 2, 0});
  EXPECT_EQ(ml(y, 3).values, y.values);
  EXPECT_EQ(ml(y, 6).values, y.values);
  EXPECT_THROW(ml(y, 0), InvalidArgument);
  EXPECT_THROW(ml(y, 7), InvalidArgument);
}

TEST(Ml, TiesGoToLowestIndex) {
  EXPECT_EQ(ml(obs({1, -1, 1, 1}), 2).values, obs({1, -1, 0, 0}).values);
}

TEST(Ml, MatchesFullSortOracle) {
  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 200; ++rep) {
    const Index n = 1 + rep % 15, s = 1 + rep % n;
    const Vector y = random_vector(n, rng);
    EXPECT_EQ(ml({y}, s).values, oracle::ml_by_sort(y, s));
  }
}

TEST(Ht, Examples) {
  EXPECT_EQ(ht(obs({3, 1, -2.5}), 2.0).values, obs({3, 0, -2.5}).values);
  EXPECT_EQ(ht(obs({2.0, -2.0, 1.999}), 2.0).values, obs({2.0, -2.0, 0}).values);
  const auto y = obs({0.1, -0.2, 0});
  EXPECT_EQ(ht(y, 0.0).values, y.values);
  EXPECT_THROW(ht(y, -1.0), InvalidArgument);
}

TEST(Ht, UniversalThresholdUsesNaturalLog) {
  EXPECT_NEAR(universal_threshold(kFig1), std::sqrt(2.0 * std::log(10.0)), 1e-15);
  EXPECT_NEAR(universal_threshold(ModelConfig(10, 4, 3.0)), 3.0 * 2.145966026289347, 1e-12);
}

TEST(ConstrainedOracle, ZeroSupportObservationDisablesCorrection) {
  const ParamVector x0{1, 2, 0, 0, 0, -1, 0, 0, 0, 3};
  const ModelConfig m(10, 4, 1.0);
  Observation y = obs({0.4, 0.0, 1.1, -0.3, 2, 0.5, 7, 0, -1, 2});
  const Estimate e = constrained_oracle(y, x0, m);
  EXPECT_EQ(e.values, y.values);
}

TEST(ConstrainedOracle, HighSnrZeroesOffSupport) {
  const ParamVector x0{50, 50, 50, 50, 0, 0, 0, 0, 0, 0};
  Observation y{x0.values()};
  y.values.tail(6).setConstant(0.8);
  const Estimate e = constrained_oracle(y, x0, kFig1);
  EXPECT_EQ(e.values.head(4), x0.values().head(4));
  EXPECT_LE(e.values.tail(6).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ConstrainedOracle, MatchesFormula) {
  const ParamVector x0{0.5, 0, -1.5, 0, 2, 0};
  const ModelConfig m(6, 3, 0.8);
  const auto y = obs({0.3, -0.7, 1.2, 0.9, -0.4, 2.0});
  double prod = 1.0;
  for (Index l : {0, 2, 4}) prod *= std::tanh(y.values[l] * x0[l] / 0.64);
  const Estimate e = constrained_oracle(y, x0, m);
  for (Index k : {0, 2, 4}) EXPECT_EQ(e.values[k], y.values[k]);
  for (Index k : {1, 3, 5}) EXPECT_NEAR(e.values[k], y.values[k] * (1.0 - prod), 1e-15);
}

TEST(ConstrainedOracle, RejectsShortSupport) {
  EXPECT_THROW(ConstrainedOracle(ParamVector{1, 1, 0, 0, 0, 0, 0, 0, 0, 0}, kFig1), OracleMismatch);
  EXPECT_THROW(ConstrainedOracle(ParamVector{1, 1, 1, 1}, kFig1), OracleMismatch);
}

TEST(ConstrainedOracle, OddSymmetryAndIndependence) {
  const ParamVector x0{0.9, 0, 1.3, 0, 0, -0.6, 0, 0, 0, 0};
  const ModelConfig m(10, 3, 1.0);
  const ConstrainedOracle est(x0, m);
  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 50; ++rep) {
    const Vector y = random_vector(10, rng);
    const Vector base = est({y}).values - y;  // correction component
    for (Index l : {0, 2, 5}) {
      Vector flipped = y;
      flipped[l] = -flipped[l];
      const Vector corr = est({flipped}).values - flipped;
      for (Index k : {1, 3, 4, 6, 7, 8, 9}) EXPECT_NEAR(corr[k], -base[k], 1e-14);
    }
    // changing an off-support coordinate other than k leaves correction k alone
    Vector moved = y;
    moved[7] += 3.0;
    const Vector corr = est({moved}).values - moved;
    for (Index k : {1, 3, 4, 6, 8, 9}) EXPECT_NEAR(corr[k], base[k], 1e-14);
  }
}

TEST(EstimatorInvariants, PermutationEquivariance) {
  std::mt19937_64 rng(8);
  const ParamVector x0{1, 0, 0, 2, 0, 0, -1, 0, 0, 0.5};
  for (int rep = 0; rep < 50; ++rep) {
    const Vector y = random_vector(10, rng, 1.5);
    const Matrix p = random_permutation(10, rng);
    const Vector py = p * y;
    EXPECT_EQ(ls({py}).values, p * ls({y}).values);
    EXPECT_EQ(ml({py}, 4).values, p * ml({y}, 4).values);
    EXPECT_EQ(ht({py}, 1.2).values, p * ht({y}, 1.2).values);
    const Vector oracle_p = constrained_oracle({py}, ParamVector(p * x0.values()), kFig1).values;
    EXPECT_LE((oracle_p - p * constrained_oracle({y}, x0, kFig1).values).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(EstimatorInvariants, SignEquivariance) {
  std::mt19937_64 rng(12);
  const ParamVector x0{1, 0, 0, 2, 0, 0, -1, 0, 0, 0.5};
  for (int rep = 0; rep < 50; ++rep) {
    const Vector y = random_vector(10, rng, 1.5);
    Vector flips(10);
    for (Index k = 0; k < 10; ++k) flips[k] = rng() % 2 ? 1.0 : -1.0;
    const Vector fy = flips.cwiseProduct(y);
    EXPECT_EQ(ls({fy}).values, flips.cwiseProduct(ls({y}).values));
    EXPECT_EQ(ml({fy}, 4).values, flips.cwiseProduct(ml({y}, 4).values));
    EXPECT_EQ(ht({fy}, 1.2).values, flips.cwiseProduct(ht({y}, 1.2).values));
    const Vector joint = constrained_oracle({fy}, ParamVector(flips.cwiseProduct(x0.values())), kFig1).values;
    EXPECT_LE((joint - flips.cwiseProduct(constrained_oracle({y}, x0, kFig1).values)).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(EstimatorInvariants, SparsityOfOutputs) {
  std::mt19937_64 rng(21);
  const ParamVector x0{1, 1, 1, 1, 0, 0, 0, 0, 0, 0};
  for (int rep = 0; rep < 100; ++rep) {
    const Vector y = x0.values() + random_vector(10, rng);
    EXPECT_LE(support(ml({y}, 4).values).size(), 4u);
    const Vector h = ht({y}, 1.5).values;
    for (Index k = 0; k < 10; ++k) EXPECT_TRUE(h[k] == 0.0 || std::abs(h[k]) >= 1.5);
    EXPECT_GT(support(ls({y}).values).size(), 4u);
    EXPECT_GT(support(constrained_oracle({y}, x0, kFig1).values).size(), 4u);
  }
}
