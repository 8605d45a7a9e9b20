#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "freqshape/analysis.hpp"
#include "freqshape/errors.hpp"
#include "freqshape/frequency.hpp"
#include "freqshape/plant.hpp"
#include "freqshape/roots.hpp"
#include "freqshape/synthesis.hpp"
#include "test_support.hpp"

namespace freqshape::plant {
namespace {

using lti::coefficient_distance;
using lti::Polynomial;
using lti::reduce_common_factors;
using lti::TransferFunction;

TEST(SystemParamsTest, Validation) {
  EXPECT_NO_THROW(SystemParams{}.validate());
  for (double SystemParams::*field : {&SystemParams::h, &SystemParams::alpha_l, &SystemParams::alpha_g,
                                      &SystemParams::tau, &SystemParams::b, &SystemParams::b_hat}) {
    SystemParams p;
    p.*field = 0.0;
    EXPECT_THROW(p.validate(), InvalidParameter);
    p.*field = -1.0;
    EXPECT_THROW(p.validate(), InvalidParameter);
    p.*field = std::nan("");
    EXPECT_THROW(p.validate(), InvalidParameter);
  }
}

TEST(SmTransferTest, DefaultParameters) {
  const TransferFunction g = sm_transfer(SystemParams{});
  EXPECT_LT(coefficient_distance(g, TransferFunction(Polynomial{1.0, 1.0}, Polynomial{21.0, 9.0, 8.0})), 1e-15);
  EXPECT_DOUBLE_EQ(g.dc_gain(), 1.0 / 21.0);
}

TEST(SmTransferTest, PolesMatchQuadraticFormula) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const SystemParams p = testing::random_params(rng);
    const TransferFunction g = sm_transfer(p);
    EXPECT_NEAR(g.dc_gain() * (p.alpha_l + p.alpha_g), 1.0, 1e-12);
    const double a = 2.0 * p.h * p.tau;
    const double b = 2.0 * p.h + p.alpha_l * p.tau;
    const double c = p.alpha_l + p.alpha_g;
    const std::complex<double> d = std::sqrt(std::complex<double>(b * b - 4.0 * a * c));
    const std::complex<double> r1 = (-b + d) / (2.0 * a);
    const std::complex<double> r2 = (-b - d) / (2.0 * a);
    const auto r = lti::roots(g.den());
    ASSERT_EQ(r.size(), 2u);
    const double err = std::min(std::abs(r[0] - r1) + std::abs(r[1] - r2), std::abs(r[0] - r2) + std::abs(r[1] - r1));
    EXPECT_LT(err, 1e-9 * std::abs(r1));
  }
}

TEST(TargetTransferTest, RhoZeroIsFirstOrder) {
  const SystemParams p;
  const TransferFunction g = target_transfer(p, {0.0});
  EXPECT_EQ(g.order(), 1);
  EXPECT_LT(coefficient_distance(g, TransferFunction(Polynomial{-1.0}, Polynomial{21.0, 8.0})), 1e-15);
}

TEST(TargetTransferTest, DcGainIsDroop) {
  const SystemParams p;
  for (double rho : {0.0, 0.1, 0.5, 0.9}) EXPECT_DOUBLE_EQ(target_transfer(p, {rho}).dc_gain(), -1.0 / 21.0);
}

TEST(TargetTransferTest, NoIbrEndpointIsMachine) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const SystemParams p = testing::random_params(rng);
    const TransferFunction g = target_transfer(p, {p.tau}, RhoDomain::kIncludeNoIbr);
    EXPECT_LT(coefficient_distance(g, -sm_transfer(p)), 1e-12);
  }
}

TEST(TargetTransferTest, RhoOutOfRange) {
  const SystemParams p;
  EXPECT_THROW(target_transfer(p, {1.0}), RhoOutOfRange);
  EXPECT_THROW(target_transfer(p, {-0.1}), RhoOutOfRange);
  EXPECT_THROW(target_transfer(p, {1.1}, RhoDomain::kIncludeNoIbr), RhoOutOfRange);
  EXPECT_THROW(target_transfer(p, {std::nan("")}), RhoOutOfRange);
}

TEST(VsiPidTest, DirectForm) {
  const TransferFunction g = vsi_pid_transfer({1.0, 2.0, 3.0});
  EXPECT_EQ(g.num(), (Polynomial{2.0, 1.0, 3.0}));
  EXPECT_EQ(g.den(), Polynomial::s());
  EXPECT_FALSE(g.is_proper());
  const TransferFunction integrator = vsi_pid_transfer({0.0, 4.0, 0.0});
  EXPECT_EQ(integrator.num(), (Polynomial{4.0}));
}

TEST(VsiPidTest, MatchedGainsSatisfyMatchingIdentity) {
  // (1/b)s + PID(s) == (tau s + 1)(rho s + 1) / (a_g s (tau - rho))
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const SystemParams p = testing::random_params(rng);
    const double rho = testing::uniform(rng, 0.0, p.tau);
    const PidGains g = synthesis::synthesize(p, {rho});
    const TransferFunction lhs = TransferFunction(Polynomial{0.0, 1.0 / p.b}, Polynomial{1.0}) + vsi_pid_transfer(g);
    const TransferFunction rhs(Polynomial{1.0, p.tau} * Polynomial{1.0, rho},
                               Polynomial{0.0, p.alpha_g * (p.tau - rho)});
    EXPECT_LT(coefficient_distance(lhs, rhs), 1e-9) << "trial " << trial;
  }
}

TEST(PvsiFromWsmTest, MatchedGainsGiveRequiredPowerMap) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const SystemParams p = testing::random_params(rng);
    const double rho = testing::uniform(rng, 0.0, p.tau);
    const TransferFunction g = pvsi_from_wsm(p, synthesis::synthesize(p, {rho}));
    const TransferFunction expected(Polynomial{0.0, -p.alpha_g * (p.tau - rho)},
                                    Polynomial{1.0, p.tau} * Polynomial{1.0, rho});
    EXPECT_LT(coefficient_distance(g, expected), 1e-9) << "trial " << trial;
  }
}

TEST(PvsiFromWsmTest, StiffLineLimit) {
  SystemParams p;
  p.b = 1e9;
  const PidGains gains{2.0, 3.0, 0.0};
  const TransferFunction g = pvsi_from_wsm(p, gains);
  const TransferFunction limit(-Polynomial::s(), Polynomial{gains.ki, gains.kp});
  for (double w : lti::FrequencyGrid{1e-3, 1e3, 50}.values()) {
    const auto a = g.at_frequency(w);
    const auto b = limit.at_frequency(w);
    EXPECT_LE(std::abs(a - b), 1e-6 * std::abs(b)) << w;
  }
}

TEST(PvsiFromWsmTest, ZeroDcGainAndDegeneracy) {
  const SystemParams p;
  EXPECT_EQ(pvsi_from_wsm(p, {1.0, 2.0, 0.5}).dc_gain(), 0.0);
  // (1/b + kd) = 0, kp = ki = 0: the inverse coupling vanishes identically.
  EXPECT_THROW(pvsi_from_wsm(p, {0.0, 0.0, -1.0}), AlgebraicDegeneracy);
}

TEST(ClosedLoopTest, MatchedGainsReproduceTarget) {
  std::mt19937_64 rng(20221213);
  for (int trial = 0; trial < 100; ++trial) {
    const SystemParams p = testing::random_params(rng);
    const double rho = testing::uniform(rng, 0.0, p.tau);
    const TransferFunction cl = reduce_common_factors(closed_loop(p, synthesis::synthesize(p, {rho})));
    ASSERT_LT(coefficient_distance(cl, target_transfer(p, {rho})), 1e-9) << "trial " << trial;
  }
}

TEST(ClosedLoopTest, ZeroGainsHandExpansion) {
  // Q = s^2/b with b = 2: -(s^3 + s^2)/2 / (4s^4 + 4.5s^3 + 11.5s^2 + s).
  SystemParams p;
  p.b = 2.0;
  const TransferFunction cl = closed_loop(p, {0.0, 0.0, 0.0});
  const TransferFunction expected(Polynomial{0.0, 0.0, -0.5, -0.5}, Polynomial{0.0, 1.0, 11.5, 4.5, 4.0});
  EXPECT_LT(coefficient_distance(cl, expected), 1e-14);
}

TEST(ClosedLoopTest, SteadyStateIsDroopWithIntegralAction) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const SystemParams p = testing::random_params(rng);
    const PidGains g{testing::uniform(rng, 0.01, 3.0), testing::uniform(rng, 0.01, 3.0),
                     testing::uniform(rng, -0.5, 3.0)};
    const TransferFunction cl = closed_loop(p, g);
    EXPECT_NEAR(cl.dc_gain() * (p.alpha_l + p.alpha_g), -1.0, 1e-9);
  }
}

TEST(ClosedLoopTest, BetaFormIdentity) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    SystemParams p = testing::random_params(rng);
    p.b_hat = p.b * testing::log_uniform(rng, 0.2, 5.0);
    const double rho = testing::uniform(rng, 0.0, p.tau);
    const TransferFunction cl = closed_loop(p, synthesis::synthesize(p, {rho}));
    const double beta = analysis::scaled_mismatch(p, rho);
    EXPECT_LT(coefficient_distance(cl, analysis::closed_loop_beta_form(p, rho, beta)), 1e-9) << "trial " << trial;
  }
}

TEST(IbrPowerTest, ThirdOrderZeroDcAndVanishingNearTau) {
  const SystemParams p;
  const TransferFunction g = ibr_power_from_load(p, {0.4});
  EXPECT_EQ(g.den().degree(), 3);
  EXPECT_EQ(g.dc_gain(), 0.0);
  const TransferFunction near = ibr_power_from_load(p, {p.tau - 1e-9});
  for (double w : {0.1, 1.0, 10.0}) EXPECT_LT(std::abs(near.at_frequency(w)), 1e-8);
  EXPECT_TRUE(ibr_power_from_load(p, {p.tau}, RhoDomain::kIncludeNoIbr).is_zero());
  EXPECT_THROW(ibr_power_from_load(p, {p.tau}), RhoOutOfRange);
}

TEST(IbrPowerTest, AgreesWithLoopChain) {
  // The required power from the target and the inverter map applied to the
  // closed loop are two derivations of the same transfer function.
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    const SystemParams p = testing::random_params(rng);
    const double rho = testing::uniform(rng, 0.01, 0.99) * p.tau;
    const PidGains g = synthesis::synthesize(p, {rho});
    const TransferFunction chain = pvsi_from_wsm(p, g) * closed_loop(p, g);
    const TransferFunction direct = ibr_power_from_load(p, {rho});
    for (int k = 0; k < 100; ++k) {
      const double w = testing::log_uniform(rng, 1e-3, 1e3);
      const auto a = chain.at_frequency(w);
      const auto b = direct.at_frequency(w);
      ASSERT_LE(std::abs(a - b), 1e-8 * std::abs(b)) << "trial " << trial << " w " << w;
    }
  }
}

TEST(StarTest, SingleBranchEqualsClosedLoop) {
  SystemParams p;
  p.b = 3.0;
  const PidGains g{1.2, 0.7, 0.1};
  EXPECT_LT(coefficient_distance(star_closed_loop(p, {{p.b, g}}), closed_loop(p, g)), 1e-14);
}

TEST(StarTest, EqualSplitReproducesTarget) {
  std::mt19937_64 rng(12);
  for (int n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 30; ++trial) {
      const SystemParams p = testing::random_params(rng);
      const double rho = testing::uniform(rng, 0.0, p.tau);
      std::vector<StarBranch> branches;
      for (int i = 0; i < n; ++i) {
        const double bi = testing::log_uniform(rng, 0.01, 1000.0);
        branches.push_back({bi, synthesis::synthesize_star_branch(p, {rho}, n, bi)});
      }
      const TransferFunction cl = reduce_common_factors(star_closed_loop(p, branches));
      ASSERT_LT(coefficient_distance(cl, target_transfer(p, {rho})), 1e-7) << "n " << n << " trial " << trial;
    }
  }
}

TEST(StarTest, Errors) {
  const SystemParams p;
  EXPECT_THROW(star_closed_loop(p, {}), InvalidParameter);
  EXPECT_THROW(star_closed_loop(p, {{-1.0, PidGains{1.0, 1.0, 0.0}}}), InvalidParameter);
}

}  // namespace
}  // namespace freqshape::plant
