#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qig/divergences.hpp"

using namespace qig;

namespace {

DensityMatrix diag2(double a, double b) { return DensityMatrix::diagonal((RVector(2) << a, b).finished()); }

ProbVector prob2(double a, double b) { return ProbVector((RVector(2) << a, b).finished()); }

auto as_fn(const GFunction& g) {
  return [g](double x) { return g(x); };
}

}  // namespace

TEST(GFunction, FlagsVerified) {
  EXPECT_THROW(GFunction("bad", [](double x) { return x; }, true, false, false), InvariantViolation);
  EXPECT_THROW(GFunction("bad", [](double x) { return 3.0 * (x - 1.0) * (x - 1.0); }, true, true, true),
               InvariantViolation);
  EXPECT_NO_THROW(GFunction("half", [](double x) { return 0.5 * (x - 1.0) * (x - 1.0); }, true, true, true));
  EXPECT_THROW(builtin_g("nope"), DomainError);
}

TEST(GFunction, BuiltinsSatisfyNormalization) {
  for (const auto& g : registry_g()) {
    EXPECT_NEAR(g(1.0), 0.0, 1e-15) << g.name();
    EXPECT_NEAR(g.second_derivative_at_one(), 1.0, 1e-6) << g.name();
  }
}

TEST(GEntropy, SelfIsZero) {
  Rng rng(1);
  const DensityMatrix rho = random_density(3, rng);
  for (const auto& g : registry_g()) EXPECT_NEAR(g_entropy(g, rho, rho), 0.0, 1e-12) << g.name();
}

TEST(GEntropy, CommutingKLExample) {
  const double expected = 0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0);
  EXPECT_NEAR(expected, 0.143841, 1e-6);
  EXPECT_NEAR(g_entropy(builtin_g("BKM"), diag2(0.5, 0.5), diag2(0.25, 0.75)), expected, 1e-15);
  EXPECT_NEAR(vnu_entropy(diag2(0.5, 0.5), diag2(0.25, 0.75)), expected, 1e-15);
  EXPECT_NEAR(classical_kl(prob2(0.5, 0.5), prob2(0.25, 0.75)), expected, 1e-15);
}

TEST(GEntropy, MatchesSuperoperator) {
  Rng rng(2);
  for (const auto& g : registry_g()) {
    for (int n = 2; n <= 4; ++n) {
      for (int trial = 0; trial < 5; ++trial) {
        const DensityMatrix rho = random_density(n, rng);
        const DensityMatrix sigma = random_density(n, rng);
        const double ref = oracle::g_entropy_superoperator(as_fn(g), rho.matrix(), sigma.matrix());
        EXPECT_NEAR(g_entropy(g, rho, sigma), ref, 1e-10 * std::max(1.0, std::abs(ref))) << g.name();
      }
    }
  }
}

TEST(VnuEntropy, EqualsGEntropyOfMinusLog) {
  Rng rng(3);
  for (int n = 2; n <= 5; ++n) {
    const DensityMatrix rho = random_density(n, rng);
    const DensityMatrix sigma = random_density(n, rng);
    const double v = vnu_entropy(rho, sigma);
    EXPECT_NEAR(g_entropy(builtin_g("BKM"), rho, sigma), v, 1e-10 * std::max(1.0, v));
    EXPECT_GT(v, 0.0);
    EXPECT_NEAR(vnu_entropy(rho, rho), 0.0, 1e-12);
  }
}

TEST(BuresFidelity, Examples) {
  EXPECT_NEAR(bures_fidelity(diag2(0.5, 0.5), diag2(0.25, 0.75)),
              std::pow(std::sqrt(0.125) + std::sqrt(0.375), 2), 1e-15);
  EXPECT_NEAR(std::pow(std::sqrt(0.125) + std::sqrt(0.375), 2), 0.933013, 1e-6);
  Rng rng(4);
  const DensityMatrix rho = random_density(3, rng);
  EXPECT_NEAR(bures_fidelity(rho, rho), 1.0, 1e-13);
}

TEST(BuresFidelity, SymmetricAndBounded) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 3;
    const DensityMatrix rho = random_density(n, rng);
    const DensityMatrix sigma = random_density(n, rng);
    const double f = bures_fidelity(rho, sigma);
    EXPECT_NEAR(f, bures_fidelity(sigma, rho), 1e-10);
    EXPECT_GT(f, 0.0);
    EXPECT_LT(f, 1.0);
  }
}

TEST(BuresDivergence, NonNegative) {
  Rng rng(6);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + trial % 3;
    const DensityMatrix rho = random_density(n, rng);
    EXPECT_GE(bures_divergence(rho, random_density(n, rng)), -1e-10);
  }
}

TEST(Renyi, SelfIsZero) {
  Rng rng(7);
  const DensityMatrix rho = random_density(3, rng);
  for (double alpha : {0.3, 0.5, 0.75, 1.5, 2.0, 3.0}) {
    EXPECT_NEAR(petz_renyi(alpha, rho, rho), 0.0, 1e-12);
    EXPECT_NEAR(sandwiched_renyi(alpha, rho, rho), 0.0, 1e-12);
    for (double z : {0.5, 1.0, 2.0}) EXPECT_NEAR(alpha_z_renyi(alpha, z, rho, rho), 0.0, 1e-12);
  }
}

TEST(Renyi, CommutingIsClassical) {
  const ProbVector p = prob2(0.2, 0.8);
  const ProbVector q = prob2(0.6, 0.4);
  for (double alpha : {0.5, 2.0}) {
    const double classical =
        std::log(std::pow(0.2, alpha) * std::pow(0.6, 1 - alpha) + std::pow(0.8, alpha) * std::pow(0.4, 1 - alpha)) /
        (alpha - 1.0);
    for (double z : {0.7, 1.0, alpha}) {
      EXPECT_NEAR(alpha_z_renyi(alpha, z, diag2(0.2, 0.8), diag2(0.6, 0.4)), classical, 1e-13);
    }
    (void)p;
    (void)q;
  }
}

TEST(Renyi, PresetsMatchAlphaZ) {
  Rng rng(8);
  const DensityMatrix rho = random_density(3, rng);
  const DensityMatrix sigma = random_density(3, rng);
  for (double alpha : {0.5, 0.75, 2.0}) {
    EXPECT_NEAR(petz_renyi(alpha, rho, sigma), alpha_z_renyi(alpha, 1.0, rho, sigma), 1e-11);
    EXPECT_NEAR(sandwiched_renyi(alpha, rho, sigma), alpha_z_renyi(alpha, alpha, rho, sigma), 1e-11);
  }
}

TEST(Renyi, LimitApproachesVnu) {
  Rng rng(9);
  const DensityMatrix rho = random_density(3, rng);
  const DensityMatrix sigma = random_density(3, rng);
  const double v = vnu_entropy(rho, sigma);
  EXPECT_NEAR(alpha_z_renyi(1.0 - 1e-4, 1.0, rho, sigma), v, 1e-4 * std::max(1.0, v));
  EXPECT_NEAR(alpha_z_renyi(1.0 + 1e-4, 1.0, rho, sigma), v, 1e-4 * std::max(1.0, v));
}

TEST(Renyi, DomainErrors) {
  const DensityMatrix rho = diag2(0.3, 0.7);
  EXPECT_THROW(petz_renyi(1.0, rho, rho), DomainError);
  EXPECT_THROW(sandwiched_renyi(-0.5, rho, rho), DomainError);
  EXPECT_THROW(alpha_z_renyi(0.5, 0.0, rho, rho), DomainError);
  EXPECT_THROW(vnu_entropy(rho, DensityMatrix::maximally_mixed(3)), DimensionMismatch);
}

TEST(Classical, FDivergenceOfXLogXIsKL) {
  Rng rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    const ProbVector p = random_chamber_point(4, rng);
    const ProbVector q = random_chamber_point(4, rng);
    EXPECT_NEAR(classical_f_div([](double x) { return x * std::log(x); }, p, q), classical_kl(p, q), 1e-14);
  }
  EXPECT_EQ(classical_kl(prob2(0.3, 0.7), prob2(0.3, 0.7)), 0.0);
  EXPECT_THROW(classical_kl(prob2(0.3, 0.7), ProbVector(RVector::Constant(3, 1.0 / 3))), DimensionMismatch);
}

TEST(Registry, DivergenceContract) {
  Rng rng(11);
  for (const auto& spec : registry_divergences()) {
    ASSERT_TRUE(spec.divergence);
    for (int trial = 0; trial < 30; ++trial) {
      const int n = 2 + trial % 3;
      const DensityMatrix rho = random_density(n, rng);
      const DensityMatrix sigma = random_density(n, rng);
      EXPECT_NEAR(spec(rho, rho), 0.0, 1e-10) << spec.name;
      EXPECT_GE(spec(rho, sigma), -1e-10) << spec.name;
    }
  }
}

TEST(Registry, ByName) {
  EXPECT_EQ(divergence_by_name("vnu").name, "vnu");
  EXPECT_EQ(divergence_by_name("g_WY").name, "g_WY");
  const DivergenceSpec s = divergence_by_name("sandwiched_renyi", 2.0);
  EXPECT_EQ(s.parameters.at("alpha"), 2.0);
  EXPECT_EQ(s.parameters.at("z"), 2.0);
  EXPECT_THROW(divergence_by_name("unknown"), DomainError);
  EXPECT_THROW(divergence_by_name("g_XX"), DomainError);
}

TEST(Registry, MonotoneFlags) {
  EXPECT_TRUE(alpha_z_spec(0.5, 0.5).monotone);
  EXPECT_FALSE(alpha_z_spec(0.5, 0.3).monotone);
  EXPECT_TRUE(alpha_z_spec(1.5, 1.0).monotone);
  EXPECT_FALSE(alpha_z_spec(1.5, 2.0).monotone);
  EXPECT_TRUE(alpha_z_spec(3.0, 2.5).monotone);
  EXPECT_FALSE(petz_renyi_spec(3.0).monotone);
  EXPECT_FALSE(sandwiched_renyi_spec(0.4).monotone);
  EXPECT_FALSE(trace_product_spec().divergence);
}
