#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include "freqshape/errors.hpp"
#include "freqshape/plant.hpp"
#include "freqshape/roots.hpp"
#include "freqshape/synthesis.hpp"
#include "test_support.hpp"

namespace freqshape::synthesis {
namespace {

SystemParams unit_params() {
  SystemParams p;
  p.tau = 1.0;
  p.alpha_g = 1.0;
  p.b_hat = 1.0;
  return p;
}

TEST(SynthesizeTest, DirectEvaluation) {
  const PidGains g = synthesize(unit_params(), {0.5});
  EXPECT_DOUBLE_EQ(g.kd, 0.0);
  EXPECT_DOUBLE_EQ(g.kp, 3.0);
  EXPECT_DOUBLE_EQ(g.ki, 2.0);
}

TEST(SynthesizeTest, LargeEstimateLimit) {
  SystemParams p;
  p.b_hat = 1e12;
  const double rho = 0.3;
  const PidGains g = synthesize(p, {rho});
  EXPECT_NEAR(g.kd, p.tau * rho / (p.alpha_g * (p.tau - rho)), 1e-11);
}

TEST(SynthesizeTest, LowerEdgeOfNGivesZeroDerivative) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const SystemParams p = testing::random_params(rng);
    const double edge = p.alpha_g * p.tau / (p.b_hat * p.tau + p.alpha_g);
    const PidGains g = synthesize(p, {edge});
    EXPECT_NEAR(g.kd, 0.0, 1e-12 * (1.0 / p.b_hat)) << "trial " << trial;
    EXPECT_TRUE(in_set_N(p, edge));
  }
}

TEST(SynthesizeTest, RhoOutOfRange) {
  EXPECT_THROW(synthesize(unit_params(), {1.0}), RhoOutOfRange);
  EXPECT_THROW(synthesize(unit_params(), {-0.01}), RhoOutOfRange);
}

TEST(SynthesizeTest, PositiveProportionalAndIntegralGains) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    SystemParams p = testing::random_params(rng);
    p.b_hat = testing::log_uniform(rng, 1e-3, 1e3);
    const PidGains g = synthesize(p, {testing::uniform(rng, 0.0, p.tau)});
    EXPECT_GT(g.kp, 0.0);
    EXPECT_GT(g.ki, 0.0);
  }
}

TEST(SynthesizeTest, NeverReadsTrueSusceptance) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    SystemParams p = testing::random_params(rng);
    const double rho = testing::uniform(rng, 0.0, p.tau);
    const PidGains before = synthesize(p, {rho});
    p.b = testing::log_uniform(rng, 1e-3, 1e3);
    const PidGains after = synthesize(p, {rho});
    EXPECT_EQ(before, after);
  }
}

TEST(SetsTest, UpperBoundIsStrict) {
  const SystemParams p;
  EXPECT_FALSE(in_set_U(p, p.tau));
  EXPECT_FALSE(in_set_N(p, p.tau));
  EXPECT_FALSE(in_set_M(p, p.tau, 0.5, 1.0));
  EXPECT_TRUE(in_set_U(p, 0.0));
}

TEST(SetsTest, MRequiresUnderestimate) {
  const SystemParams p;
  for (double rho : {0.0, 0.3, 0.9}) EXPECT_FALSE(in_set_M(p, rho, 1.0, 1.0));
}

// For an underestimate the non-negative derivative gain range sits inside the
// stability range: N(b_hat) is contained in the rho-slice of M at (b_hat, b).
TEST(SetsTest, InclusionChain) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 1000; ++trial) {
    SystemParams p = testing::random_params(rng);
    const double b = p.b;
    const double b_hat = b * testing::uniform(rng, 0.01, 0.999);
    p.b_hat = b_hat;
    const double rho = testing::uniform(rng, 0.0, p.tau);
    if (in_set_N(p, rho)) {
      ASSERT_TRUE(in_set_M(p, rho, b_hat, b)) << "trial " << trial;
    }
    if (in_set_M(p, rho, b_hat, b)) {
      ASSERT_TRUE(in_set_U(p, rho)) << "trial " << trial;
    }
  }
}

// The reverse containment fails: rho = 0.4 is in M but below the N bound 0.5.
TEST(SetsTest, MSliceNotContainedInN) {
  SystemParams p;
  p.tau = 1.0;
  p.alpha_g = 1.0;
  p.b = 2.0;
  p.b_hat = 1.0;
  EXPECT_TRUE(in_set_M(p, 0.4, p.b_hat, p.b));
  EXPECT_FALSE(in_set_N(p, 0.4));
  EXPECT_EQ(certify(p, {0.4}).verdict, Verdict::kStableByConditionII);
}

TEST(XiTest, PositiveUnderTheoremConditions) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 2000; ++trial) {
    SystemParams p = testing::random_params(rng);
    p.b_hat = p.b * testing::log_uniform(rng, 0.01, 100.0);
    const double rho = testing::uniform(rng, 0.0, p.tau);
    if (p.b_hat >= p.b || in_set_M(p, rho, p.b_hat, p.b)) {
      ASSERT_GT(xi(p, rho), 0.0) << "trial " << trial;
    }
  }
}

TEST(CertifyTest, MatchedDesignIsConditionI) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const SystemParams p = testing::random_params(rng);
    const double rho = testing::uniform(rng, 0.01, 0.99) * p.tau;
    const StabilityCertificate c = certify(p, {rho});
    EXPECT_EQ(c.verdict, Verdict::kStableByConditionI);
    EXPECT_FALSE(c.theorem_contradiction);
    // The surviving poles are those of the shaped target.
    const auto target_poles = lti::roots(plant::target_transfer(p, {rho}).den());
    ASSERT_EQ(c.poles.size(), target_poles.size()) << "trial " << trial;
    for (const auto& z : target_poles) {
      double best = 1e300;
      for (const auto& q : c.poles) best = std::min(best, std::abs(z - q));
      EXPECT_LT(best, 1e-6 * std::max(1.0, std::abs(z))) << "trial " << trial;
    }
  }
}

TEST(CertifyTest, ReportAndCsv) {
  const SystemParams p = unit_params();
  const StabilityCertificate c = certify(p, {0.5});
  const std::string report = format_report(p, {0.5}, c);
  EXPECT_NE(report.find("verdict = StableByConditionI"), std::string::npos);
  EXPECT_NE(report.find("kd = 0\n"), std::string::npos);
  const std::string row = certificate_csv_row(p, {0.5}, c);
  const std::string header = certificate_csv_header();
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), std::count(header.begin(), header.end(), ','));
}

TEST(CertifyTest, VerdictMatchesPoleCheck) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    SystemParams p = testing::random_params(rng);
    p.b_hat = p.b * testing::log_uniform(rng, 0.01, 100.0);
    const StabilityCertificate c = certify(p, {testing::uniform(rng, 0.0, p.tau)});
    ASSERT_EQ(c.verdict == Verdict::kUnstable, c.max_pole_real >= -1e-9) << "trial " << trial;
  }
}

TEST(CertifyTest, TheoremConditionsAreSufficient) {
  std::mt19937_64 rng(8);
  int condition_ii = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    SystemParams p = testing::random_params(rng);
    const double rho = testing::uniform(rng, 0.0, p.tau);
    if (trial % 2 == 0) {
      p.b_hat = p.b * testing::log_uniform(rng, 1.0, 100.0);
    } else {
      // Underestimate with rho inside M: pick b_hat so the M lower bound sits below rho.
      const double c = testing::uniform(rng, 0.0, 1.0);
      p.b_hat = p.b * (1.0 - c * (1.0 - 1e-3));
      if (!in_set_M(p, rho, p.b_hat, p.b)) continue;
      ++condition_ii;
    }
    const StabilityCertificate cert = certify(p, {rho});
    ASSERT_NE(cert.verdict, Verdict::kUnstable) << "trial " << trial;
    ASSERT_LT(cert.max_pole_real, -1e-9) << "trial " << trial;
    ASSERT_FALSE(cert.theorem_contradiction);
  }
  EXPECT_GT(condition_ii, 50);
}

// Grid search over (rho, b_hat/b, b) outside M for an underestimate that destabilises the loop.
std::optional<std::pair<SystemParams, double>> find_unstable_underestimate() {
  SystemParams p;
  for (double b : {0.01, 0.03, 0.1, 0.3, 1.0, 3.0}) {
    for (double ratio : {0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9}) {
      for (double rho_frac : {0.0, 0.01, 0.02, 0.05, 0.1, 0.2}) {
        p.b = b;
        p.b_hat = ratio * b;
        const double rho = rho_frac * p.tau;
        if (in_set_M(p, rho, p.b_hat, p.b)) continue;
        if (certify(p, {rho}).verdict == Verdict::kUnstable) return std::make_pair(p, rho);
      }
    }
  }
  return std::nullopt;
}

TEST(CertifyTest, UnderestimateCanDestabilise) {
  const auto found = find_unstable_underestimate();
  ASSERT_TRUE(found.has_value());
  const auto& [p, rho] = *found;
  EXPECT_LT(p.b_hat, p.b);
  EXPECT_FALSE(in_set_M(p, rho, p.b_hat, p.b));
  EXPECT_GE(lti::max_real_part(lti::reduce_common_factors(plant::closed_loop(p, synthesize(p, {rho}))).den()), 0.0);
}

TEST(CertifyTest, OverestimateNeverUnstable) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 500; ++trial) {
    SystemParams p = testing::random_params(rng);
    p.b_hat = p.b * testing::log_uniform(rng, 1.0, 10.0);
    const StabilityCertificate c = certify(p, {testing::uniform(rng, 0.0, p.tau)});
    ASSERT_NE(c.verdict, Verdict::kUnstable) << "trial " << trial;
  }
}

TEST(CertifyTest, MinimumPhaseIffInN) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 1000; ++trial) {
    const SystemParams p = testing::random_params(rng);
    const double rho = testing::uniform(rng, 0.0, p.tau);
    const StabilityCertificate c = certify(p, {rho});
    ASSERT_EQ(c.minimum_phase, c.gains.kd >= 0.0) << "trial " << trial;
    ASSERT_EQ(c.minimum_phase, in_set_N(p, rho)) << "trial " << trial;
  }
  // k_d = 0 exactly: first-order numerator with positive coefficients.
  const SystemParams p = unit_params();
  EXPECT_TRUE(certify(p, {0.5}).minimum_phase);
}

TEST(CertifyTest, MatchedDesignIsPassive) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const SystemParams p = testing::random_params(rng);
    const StabilityCertificate c = certify(p, {testing::uniform(rng, 0.0, p.tau)});
    EXPECT_TRUE(c.ibr_branch_positive_real) << "trial " << trial;
    EXPECT_TRUE(c.effective_turbine_positive_real) << "trial " << trial;
    EXPECT_TRUE(c.passive_interconnection) << "trial " << trial;
  }
}

TEST(StarBranchTest, SingleBranchIsPlainSynthesis) {
  SystemParams p;
  p.b_hat = 2.5;
  EXPECT_EQ(synthesize_star_branch(p, {0.4}, 1, p.b_hat), synthesize(p, {0.4}));
  EXPECT_THROW(synthesize_star_branch(p, {0.4}, 0, 1.0), InvalidParameter);
}

}  // namespace
}  // namespace freqshape::synthesis
