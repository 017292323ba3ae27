#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qig/identifications.hpp"

using namespace qig;

namespace {

DensityMatrix rho_03_07() { return DensityMatrix::diagonal((RVector(2) << 0.3, 0.7).finished()); }

Hermitian random_observable(Eigen::Index n, Rng& rng) {
  const CMatrix g = ginibre(n, n, rng);
  return Hermitian::symmetrized(g);
}

double mean_value(const DensityMatrix& rho, const Hermitian& a) {
  return (rho.matrix() * a.matrix()).trace().real();
}

}  // namespace

TEST(JordanForward, IdentityGivesZero) {
  Rng rng(1);
  const DensityMatrix rho = random_density(3, rng);
  EXPECT_LT(max_abs(jordan_forward(rho, Hermitian::identity(3)).matrix()), 1e-15);
  EXPECT_LT(max_abs(sqrt_forward(rho, Hermitian::identity(3)).matrix()), 1e-15);
  EXPECT_LT(max_abs(exp_forward(rho, Hermitian::identity(3)).matrix()), 1e-15);
}

TEST(JordanForward, QubitSigma1) {
  // {ρ,σ1} = (ρσ1 + σ1ρ)/2 = σ1 (p1+p2)/2 = σ1/2 and Tr(ρσ1) = 0.
  EXPECT_LT(max_abs(jordan_forward(rho_03_07(), Hermitian(pauli_x())).matrix() - 0.5 * pauli_x()), 1e-15);
}

TEST(JordanForward, DiagonalArithmetic) {
  const Hermitian a(pauli_z());
  const CMatrix expected = diag((RVector(2) << 0.42, -0.42).finished());
  EXPECT_LT(max_abs(jordan_forward(rho_03_07(), a).matrix() - expected), 1e-15);
}

TEST(JordanSolve, QubitSigma1AndZero) {
  EXPECT_LT(max_abs(jordan_solve(rho_03_07(), TangentVector(pauli_x())).matrix() - 2.0 * pauli_x()), 1e-14);
  EXPECT_LT(max_abs(jordan_solve(rho_03_07(), TangentVector(CMatrix::Zero(2, 2))).matrix()), 0.0 + 1e-300);
}

TEST(JordanSolve, MatchesKroneckerSolveInGauge) {
  Rng rng(2);
  for (int n = 2; n <= 5; ++n) {
    const DensityMatrix rho = random_density(n, rng);
    const TangentVector v = random_tangent(n, rng);
    const Hermitian a = jordan_solve(rho, v);
    CMatrix ref = oracle::anticomm_solve_kron(rho.matrix(), v.matrix());
    ref.diagonal().array() -= (rho.matrix() * ref).trace();
    EXPECT_LT(max_abs(a.matrix() - ref), 1e-9 * std::max(1.0, max_abs(ref)));
    EXPECT_NEAR(mean_value(rho, a), 0.0, 1e-10 * std::max(1.0, max_abs(ref)));
  }
}

TEST(SqrtForward, QubitSigma1) {
  const double w = 0.5 * (1.0 + 2.0 * std::sqrt(0.21));
  EXPECT_NEAR(w, 0.958258, 1e-6);
  EXPECT_LT(max_abs(sqrt_forward(rho_03_07(), Hermitian(pauli_x())).matrix() - w * pauli_x()), 1e-15);
}

TEST(SqrtForward, DirectMatrixProducts) {
  Rng rng(3);
  for (int n = 2; n <= 5; ++n) {
    const DensityMatrix rho = random_density(n, rng);
    const Hermitian a = random_observable(n, rng);
    const CMatrix r = oracle::hermitian_function(rho.matrix(), [](double x) { return std::sqrt(x); });
    const CMatrix& p = rho.matrix();
    const CMatrix direct = 0.5 * (p * a.matrix() + a.matrix() * p) + r * a.matrix() * r -
                           2.0 * mean_value(rho, a) * p;
    EXPECT_LT(max_abs(sqrt_forward(rho, a).matrix() - direct), 1e-13);
  }
}

TEST(ExpForward, QubitSigma1) {
  const double l = 0.4 / (std::log(0.7) - std::log(0.3));
  EXPECT_NEAR(l, 0.472086, 5e-6);
  EXPECT_LT(max_abs(exp_forward(rho_03_07(), Hermitian(pauli_x())).matrix() - l * pauli_x()), 1e-15);
}

TEST(ExpForward, MatchesGaussLegendreQuadrature) {
  Rng rng(4);
  for (int n = 2; n <= 4; ++n) {
    const DensityMatrix rho = random_density(n, rng);
    const Hermitian a = random_observable(n, rng);
    const CMatrix quad = oracle::exp_integral(rho.matrix(), a.matrix()) - mean_value(rho, a) * rho.matrix();
    // The λ-integrand is smooth only as far as the spectrum is not too spread.
    const double spread = std::log(rho.spectrum().values.maxCoeff() / rho.spectrum().values.minCoeff());
    if (spread > 12.0) continue;
    EXPECT_LT(max_abs(exp_forward(rho, a).matrix() - quad), 1e-9);
  }
}

TEST(CommutingCollapse, JordanExpAndSqrt) {
  Rng rng(5);
  for (int n = 2; n <= 5; ++n) {
    const ProbVector p = random_chamber_point(n, rng);
    const DensityMatrix rho = DensityMatrix::diagonal(p.values());
    RVector d = random_zero_sum(n, rng);
    d.array() -= d.dot(p.values());
    const Hermitian a(diag(d));
    const CMatrix j = jordan_forward(rho, a).matrix();
    EXPECT_LT(max_abs(exp_forward(rho, a).matrix() - j), 1e-15);
    EXPECT_LT(max_abs(sqrt_forward(rho, a).matrix() - 2.0 * j), 1e-15);
    const TangentVector v(j);
    EXPECT_LT(max_abs(sqrt_solve(rho, v).matrix() - 0.5 * jordan_solve(rho, v).matrix()), 1e-13);
  }
}

TEST(Solves, ZeroMapsToZero) {
  Rng rng(6);
  const DensityMatrix rho = random_density(3, rng);
  const TangentVector zero(CMatrix::Zero(3, 3));
  for (auto fam : {Family::kBH, Family::kWY, Family::kBKM}) {
    EXPECT_LT(max_abs(gradient_solve(fam, rho, zero).matrix()), 1e-300);
  }
}

TEST(Solves, RoundTripsAndGauge) {
  Rng rng(7);
  for (int n = 2; n <= 6; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      const DensityMatrix rho = random_density(n, rng);
      const TangentVector v = random_tangent(n, rng);
      for (auto fam : {Family::kBH, Family::kWY, Family::kBKM}) {
        const Hermitian a = gradient_solve(fam, rho, v);
        const double scale = std::max(1.0, max_abs(a.matrix()));
        EXPECT_LT(max_abs(gradient_field(fam, rho, a).matrix() - v.matrix()), 1e-10) << to_string(fam);
        EXPECT_NEAR(mean_value(rho, a), 0.0, 1e-10 * scale) << to_string(fam);
      }
    }
  }
}

TEST(Solves, DiagonalExpSolve) {
  const DensityMatrix rho = rho_03_07();
  const TangentVector v(pauli_z());
  const Hermitian a = exp_solve(rho, v);
  // a_jj = v_jj/p_j + c with c fixed by Tr(ρa) = 0.
  const double c = -(0.3 * (1.0 / 0.3) + 0.7 * (-1.0 / 0.7));
  EXPECT_NEAR(a.matrix()(0, 0).real(), 1.0 / 0.3 + c, 1e-13);
  EXPECT_NEAR(a.matrix()(1, 1).real(), -1.0 / 0.7 + c, 1e-13);
}

TEST(Solves, SingularRejected) {
  const CMatrix near_pure = diag((RVector(2) << 1.0 - 5e-11, 5e-11).finished());
  EXPECT_THROW(DensityMatrix{near_pure}, InvariantViolation);
}

TEST(Solves, DimensionMismatch) {
  EXPECT_THROW(jordan_solve(rho_03_07(), TangentVector(CMatrix::Zero(3, 3))), DimensionMismatch);
  EXPECT_THROW(jordan_forward(rho_03_07(), Hermitian::identity(3)), DimensionMismatch);
}

TEST(UnitaryField, QubitSigma1) {
  EXPECT_LT(max_abs(unitary_field(rho_03_07(), Hermitian(pauli_x())).matrix() + 0.2 * pauli_y()), 1e-15);
}

TEST(UnitaryField, VanishesOnCommutingAndTraceless) {
  Rng rng(8);
  const DensityMatrix rho = random_density(4, rng);
  const Hermitian b = matrix_function(rho.spectrum(), [](double x) { return x * x - 1.0; });
  EXPECT_LT(max_abs(unitary_field(rho, b).matrix()), 1e-15);
  const Hermitian c = random_observable(4, rng);
  EXPECT_NEAR(std::abs(unitary_field(rho, c).matrix().trace()), 0.0, 1e-15);
  EXPECT_GT(max_abs(unitary_field(rho, c).matrix()), 1e-3);
}

TEST(FamilyNames, RoundTrip) {
  for (auto fam : {Family::kBH, Family::kWY, Family::kBKM}) EXPECT_EQ(family_from_string(to_string(fam)), fam);
  EXPECT_THROW(family_from_string("XYZ"), DomainError);
}
