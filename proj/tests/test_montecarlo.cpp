#include <gtest/gtest.h>

#include <cmath>

#include "ssnm/bounds.hpp"
#include "ssnm/montecarlo.hpp"

using namespace ssnm;

namespace {

const ModelConfig kFig1(10, 4, 1.0);
const ParamVector kR1{1, 1, 1, 1, 0, 0, 0, 0, 0, 0};

Estimator ls_handle() {
  return [](const Observation& y) { return ls(y); };
}

}  // namespace

TEST(TrialStream, DeterministicAndKeyedByTrial) {
  TrialStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  const double va = a.gaussian();
  EXPECT_EQ(va, b.gaussian());
  EXPECT_NE(va, c.gaussian());
  EXPECT_NE(va, d.gaussian());
}

TEST(SplitMix64, KnownSequence) {
  // Reference outputs of SplitMix64 seeded with 0.
  SplitMix64 g(0);
  EXPECT_EQ(g(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(g(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(g(), 0x06c45d188009454fULL);
}

TEST(McConfig, MinimumTrials) {
  EXPECT_THROW(McConfig(99, 1), InvalidArgument);
  EXPECT_NO_THROW(McConfig(100, 1));
}

TEST(Sample, TinySigmaReturnsX0) {
  TrialStream s(1, 0);
  const Observation y = sample(kR1, kFig1.with_sigma(1e-300), s);
  EXPECT_LE((y.values - kR1.values()).cwiseAbs().maxCoeff(), 1e-290);
}

TEST(Sample, MeanConvergesToX0) {
  const int trials = 100000;
  Vector sum = Vector::Zero(10);
  for (int t = 0; t < trials; ++t) {
    TrialStream s(5, static_cast<std::uint64_t>(t));
    sum += sample(kR1, kFig1, s).values;
  }
  const Vector mean = sum / trials;
  EXPECT_LE((mean - kR1.values()).cwiseAbs().maxCoeff(), 4.0 / std::sqrt(trials));
}

TEST(Sample, RejectsInadmissible) {
  TrialStream s(1, 0);
  EXPECT_THROW(sample(ParamVector(Vector::Ones(10)), kFig1, s), SparsityViolation);
}

TEST(Summarize, MeanAndStandardError) {
  const auto e = summarize({1.0, 2.0, 3.0, 4.0}, 9);
  EXPECT_DOUBLE_EQ(e.mean, 2.5);
  EXPECT_NEAR(e.std_error, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
  EXPECT_EQ(e.trials, 4);
  EXPECT_EQ(e.seed, 9u);
}

TEST(EstimateMse, LsIsNSigmaSquared) {
  const auto e = estimate_mse(ls_handle(), kR1, kFig1, McConfig(20000, 3));
  EXPECT_LE(std::abs(e.mean - 10.0), 3.0 * e.std_error);
  const auto e2 = estimate_mse(ls_handle(), kR1, kFig1.with_sigma(0.5), McConfig(20000, 4));
  EXPECT_LE(std::abs(e2.mean - 2.5), 3.0 * e2.std_error);
}

TEST(EstimateMse, ConstantEstimatorAtTruthIsZero) {
  const Estimator constant = [](const Observation&) { return Estimate{kR1.values()}; };
  const auto e = estimate_mse(constant, kR1, kFig1, McConfig(1000, 1));
  EXPECT_EQ(e.mean, 0.0);
  EXPECT_EQ(e.std_error, 0.0);
}

TEST(EstimateMse, ReproducibleBitForBit) {
  const McConfig mc(5000, 77);
  const Estimator ml4 = [](const Observation& y) { return ml(y, 4); };
  const auto a = estimate_mse(ml4, kR1, kFig1, mc);
  const auto b = estimate_mse(ml4, kR1, kFig1, mc);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std_error, b.std_error);
}

TEST(EstimateMse, SharedDrawsMatchSeparateRuns) {
  const McConfig mc(3000, 5);
  const Estimator ml4 = [](const Observation& y) { return ml(y, 4); };
  const auto both = estimate_mse(std::vector<Estimator>{ls_handle(), ml4}, kR1, kFig1, mc);
  EXPECT_EQ(both[0].mean, estimate_mse(ls_handle(), kR1, kFig1, mc).mean);
  EXPECT_EQ(both[1].mean, estimate_mse(ml4, kR1, kFig1, mc).mean);
}

TEST(EstimateMse, LongerRunsExtendShorterOnes) {
  const auto short_run = squared_errors({ls_handle()}, kR1, kFig1, McConfig(10000, 11)).front();
  const auto long_run = squared_errors({ls_handle()}, kR1, kFig1, McConfig(100000, 11)).front();
  ASSERT_EQ(long_run.size(), 100000u);
  for (std::size_t t = 0; t < short_run.size(); ++t) ASSERT_EQ(short_run[t], long_run[t]) << t;
}

TEST(EstimateMse, StandardErrorScalesAsInverseRootTrials) {
  const auto a = estimate_mse(ls_handle(), kR1, kFig1, McConfig(10000, 2));
  const auto b = estimate_mse(ls_handle(), kR1, kFig1, McConfig(40000, 2));
  EXPECT_GE(a.mean, 0.0);
  EXPECT_NEAR(a.std_error / b.std_error, 2.0, 0.4);
}

TEST(EstimateMse, OracleMatchesBbCAtZeroDb) {
  const ParamVector x0{1.58113883008418966, 1.58113883008418966, 1.58113883008418966,
                       1.58113883008418966, 0, 0, 0, 0, 0, 0};
  const auto e = estimate_mse(Estimator(ConstrainedOracle(x0, kFig1)), x0, kFig1, McConfig(100000, 8));
  EXPECT_LE(std::abs(e.mean - bb_c(x0, kFig1).value), 3.0 * e.std_error);
}

TEST(EstimateBias, LsUnbiased) {
  const auto bias = estimate_bias(ls_handle(), kR1, kFig1, McConfig(20000, 6));
  ASSERT_EQ(bias.size(), 10u);
  for (const auto& b : bias) EXPECT_LE(std::abs(b.mean), 4.0 * b.std_error);
}

TEST(EstimateBias, HtShrinksSmallComponent) {
  const ParamVector x{0.5, 3, 3, 3, 0, 0, 0, 0, 0, 0};
  const Estimator ht_u = [](const Observation& y) { return ht(y, kFig1); };
  const auto bias = estimate_bias(ht_u, x, kFig1, McConfig(20000, 12));
  EXPECT_LT(bias[0].mean, -4.0 * bias[0].std_error);
  EXPECT_LT(bias[0].mean, -0.3);
}

TEST(EstimateBias, OracleUnbiasedAwayFromAnchor) {
  const ParamVector x0{1, 1, 1, 1, 0, 0, 0, 0, 0, 0};
  const ParamVector x{0, 2, 1, 0, 0, 1.5, 0, -0.7, 0, 0};
  const auto bias = estimate_bias(Estimator(ConstrainedOracle(x0, kFig1)), x, kFig1, McConfig(20000, 13));
  for (const auto& b : bias) EXPECT_LE(std::abs(b.mean), 4.0 * b.std_error);
}
