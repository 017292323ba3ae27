#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qig/metrics.hpp"

using namespace qig;

namespace {

DensityMatrix rho_03_07() { return DensityMatrix::diagonal((RVector(2) << 0.3, 0.7).finished()); }

Hermitian centred_observable(const DensityMatrix& rho, Rng& rng) {
  const CMatrix g = ginibre(rho.dim(), rho.dim(), rng);
  CMatrix a = 0.5 * (g + g.adjoint());
  a.diagonal().array() -= (rho.matrix() * a).trace();
  return Hermitian::symmetrized(a);
}

auto as_fn(const MonotoneFunction& f) {
  return [f](double x) { return f(x); };
}

}  // namespace

TEST(BuiltinF, Values) {
  EXPECT_DOUBLE_EQ(builtin_f("BH")(1.0), 1.0);
  EXPECT_DOUBLE_EQ(builtin_f("WY")(1.0), 1.0);
  EXPECT_NEAR(builtin_f("BKM")(2.0), 1.0 / std::log(2.0), 1e-15);
  EXPECT_NEAR(1.0 / std::log(2.0), 1.442695, 1e-6);
  EXPECT_NEAR(builtin_f("BKM")(1.0 + 1e-10), 1.0 + 0.5e-10, 1e-15);
  EXPECT_THROW(builtin_f("XYZ"), DomainError);
}

TEST(MonotoneFunction, FlagsVerified) {
  EXPECT_THROW(MonotoneFunction("bad", [](double x) { return x; }, true, true), InvariantViolation);
  EXPECT_THROW(MonotoneFunction("bad", [](double x) { return 2.0 * x; }, false, true), InvariantViolation);
  const MonotoneFunction lopsided("lopsided", [](double x) { return x; }, false, true);
  EXPECT_THROW(petz_metric(lopsided, rho_03_07(), TangentVector(pauli_x()), TangentVector(pauli_x())),
               InvariantViolation);
}

TEST(PetzMetric, QubitBHExample) {
  const TangentVector v(pauli_x());
  EXPECT_NEAR(petz_metric(Family::kBH, rho_03_07(), v, v), 4.0, 1e-14);
  const TangentVector zero(CMatrix::Zero(2, 2));
  EXPECT_EQ(petz_metric(Family::kBH, rho_03_07(), zero, zero), 0.0);
}

TEST(PetzMetric, MatchesSuperoperator) {
  Rng rng(1);
  for (const auto& f : registry_f()) {
    for (int n = 2; n <= 4; ++n) {
      for (int trial = 0; trial < 10; ++trial) {
        const DensityMatrix rho = random_density(n, rng);
        const TangentVector v = random_tangent(n, rng);
        const TangentVector w = random_tangent(n, rng);
        const double lib = petz_metric(f, rho, v, w);
        const double ref = oracle::petz_superoperator(as_fn(f), rho.matrix(), v.matrix(), w.matrix());
        EXPECT_NEAR(lib, ref, 1e-8 * std::max(1.0, std::abs(ref))) << f.name() << " n=" << n;
      }
    }
  }
}

TEST(PetzMetric, SymmetricAndPositiveDefinite) {
  Rng rng(2);
  for (const auto& f : registry_f()) {
    const int n = 3;
    const DensityMatrix rho = random_density(n, rng);
    const auto basis = su_basis(n);
    Eigen::MatrixXd gram(basis.size(), basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
      for (std::size_t j = 0; j < basis.size(); ++j) {
        gram(i, j) = petz_metric(f, rho, TangentVector(basis[i]), TangentVector(basis[j]));
      }
    }
    EXPECT_LT((gram - gram.transpose()).cwiseAbs().maxCoeff(), 1e-10 * gram.cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (gram + gram.transpose()));
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0) << f.name();
  }
}

TEST(PetzMetric, CommutingReductionIsFisherRao) {
  Rng rng(3);
  for (const auto& f : registry_f()) {
    for (int n = 2; n <= 5; ++n) {
      const ProbVector p = random_chamber_point(n, rng);
      const RVector a = random_zero_sum(n, rng);
      const RVector b = random_zero_sum(n, rng);
      const CMatrix u = random_unitary(n, rng);
      const DensityMatrix rho(Hermitian::symmetrized(u * diag(p.values()) * u.adjoint()));
      const TangentVector v(Hermitian::symmetrized(u * diag(a) * u.adjoint()));
      const TangentVector w(Hermitian::symmetrized(u * diag(b) * u.adjoint()));
      const double classical = (a.array() * b.array() / p.values().array()).sum();
      EXPECT_NEAR(petz_metric(f, rho, v, w), classical, 1e-12 * std::max(1.0, std::abs(classical)));
    }
  }
}

TEST(PetzMetric, UnitaryInvariance) {
  Rng rng(4);
  for (const auto& f : registry_f()) {
    for (int n = 2; n <= 4; ++n) {
      const DensityMatrix rho = random_density(n, rng);
      const TangentVector v = random_tangent(n, rng);
      const TangentVector w = random_tangent(n, rng);
      const CMatrix u = random_unitary(n, rng);
      auto conj = [&](const CMatrix& m) { return Hermitian::symmetrized(u * m * u.adjoint()); };
      const double before = petz_metric(f, rho, v, w);
      const double after = petz_metric(f, DensityMatrix(conj(rho.matrix())), TangentVector(conj(v.matrix())),
                                       TangentVector(conj(w.matrix())));
      EXPECT_NEAR(before, after, 1e-10 * std::max(1.0, std::abs(before)));
    }
  }
}

TEST(ClosedForms, Examples) {
  const Hermitian id = Hermitian::identity(2);
  const Hermitian x(pauli_x());
  const Hermitian z(pauli_z());
  EXPECT_NEAR(bh_closed(rho_03_07(), id, id), 0.0, 1e-15);
  EXPECT_NEAR(bh_closed(rho_03_07(), x, x), 1.0, 1e-15);
  EXPECT_NEAR(wy_closed(rho_03_07(), id, id), 0.0, 1e-15);
  EXPECT_NEAR(wy_closed(rho_03_07(), z, z), 1.68, 1e-14);
  EXPECT_NEAR(bkm_closed(rho_03_07(), id, id), 0.0, 1e-15);
}

TEST(ClosedForms, BkmCommuting) {
  const RVector p = (RVector(3) << 0.2, 0.3, 0.5).finished();
  const RVector a = (RVector(3) << 1.0, -2.0, 0.5).finished();
  const RVector b = (RVector(3) << 0.3, 0.1, -1.0).finished();
  const double expected = (p.array() * a.array() * b.array()).sum() - p.dot(a) * p.dot(b);
  EXPECT_NEAR(bkm_closed(DensityMatrix::diagonal(p), Hermitian(diag(a)), Hermitian(diag(b))), expected, 1e-15);
}

TEST(ClosedForms, BkmMatchesQuadrature) {
  Rng rng(5);
  for (int n = 2; n <= 4; ++n) {
    const DensityMatrix rho = random_density(n, rng);
    const double spread = std::log(rho.spectrum().values.maxCoeff() / rho.spectrum().values.minCoeff());
    if (spread > 12.0) continue;
    const Hermitian a = centred_observable(rho, rng);
    const Hermitian b = centred_observable(rho, rng);
    EXPECT_NEAR(bkm_closed(rho, a, b), oracle::bkm_quadrature(rho.matrix(), a.matrix(), b.matrix()), 1e-9);
  }
}

TEST(ClosedForms, AgreeWithSuperoperatorOnIdentifications) {
  Rng rng(6);
  for (int n = 2; n <= 4; ++n) {
    for (int trial = 0; trial < 10; ++trial) {
      const DensityMatrix rho = random_density(n, rng);
      const Hermitian a = centred_observable(rho, rng);
      const Hermitian b = centred_observable(rho, rng);
      auto oracle_metric = [&](const MonotoneFunction& f, const TangentVector& va, const TangentVector& vb) {
        return oracle::petz_superoperator(as_fn(f), rho.matrix(), va.matrix(), vb.matrix());
      };
      const double bh = oracle_metric(builtin_f("BH"), jordan_forward(rho, a), jordan_forward(rho, b));
      const double wy = oracle_metric(builtin_f("WY"), sqrt_forward(rho, a), sqrt_forward(rho, b));
      const double bkm = oracle_metric(builtin_f("BKM"), exp_forward(rho, a), exp_forward(rho, b));
      EXPECT_NEAR(bh, bh_closed(rho, a, b), 1e-9 * std::max(1.0, std::abs(bh)));
      EXPECT_NEAR(wy, 2.0 * wy_closed(rho, a, b), 1e-9 * std::max(1.0, std::abs(wy)));
      EXPECT_NEAR(bkm, bkm_closed(rho, a, b), 1e-9 * std::max(1.0, std::abs(bkm)));
    }
  }
}

TEST(GradientProperty, PairingWithTangents) {
  Rng rng(7);
  const int n = 3;
  const DensityMatrix rho = random_density(n, rng);
  const Hermitian a = centred_observable(rho, rng);
  const TangentVector u = random_tangent(n, rng);
  const double pairing = (u.matrix() * a.matrix()).trace().real();
  EXPECT_NEAR(petz_metric(Family::kBH, rho, jordan_forward(rho, a), u), pairing, 1e-12);
  EXPECT_NEAR(petz_metric(Family::kWY, rho, sqrt_forward(rho, a), u), 2.0 * pairing, 1e-12);
  EXPECT_NEAR(petz_metric(Family::kBKM, rho, exp_forward(rho, a), u), pairing, 1e-12);
}

TEST(WyRoundMetric, FourTimesSquareRootSolve) {
  Rng rng(8);
  const DensityMatrix rho = random_density(3, rng);
  const TangentVector v = random_tangent(3, rng);
  const TangentVector w = random_tangent(3, rng);
  const CMatrix xv = oracle::sqrt_anticomm_solve_kron(rho.matrix(), v.matrix());
  const CMatrix xw = oracle::sqrt_anticomm_solve_kron(rho.matrix(), w.matrix());
  const double round = 4.0 * (xv * xw).trace().real();
  EXPECT_NEAR(petz_metric(Family::kWY, rho, v, w), round, 1e-9 * std::max(1.0, std::abs(round)));
}

TEST(FisherRao, Examples) {
  const RVector a = (RVector(2) << 1.0, -1.0).finished();
  EXPECT_NEAR(fisher_rao(ProbVector((RVector(2) << 0.5, 0.5).finished()), a, a), 4.0, 1e-15);
  EXPECT_NEAR(fisher_rao(ProbVector((RVector(2) << 0.3, 0.7).finished()), a, a), 1.0 / 0.3 + 1.0 / 0.7, 1e-14);
  EXPECT_NEAR(1.0 / 0.3 + 1.0 / 0.7, 4.761905, 1e-6);
  EXPECT_THROW(fisher_rao(ProbVector((RVector(2) << 0.5, 0.5).finished()), (RVector(2) << 1.0, 0.0).finished(), a),
               InvariantViolation);
}

TEST(FisherRao, Bilinear) {
  Rng rng(9);
  const ProbVector p = random_chamber_point(4, rng);
  const RVector a = random_zero_sum(4, rng);
  const RVector b = random_zero_sum(4, rng);
  const RVector c = random_zero_sum(4, rng);
  EXPECT_NEAR(fisher_rao(p, a + 2.0 * b, c), fisher_rao(p, a, c) + 2.0 * fisher_rao(p, b, c), 1e-13);
  EXPECT_NEAR(fisher_rao(p, a, b), fisher_rao(p, b, a), 1e-15);
}

TEST(PullbackMetric, QubitCoefficientAndBlocks) {
  const UnfoldedPoint x(CMatrix::Identity(2, 2), ProbVector((RVector(2) << 0.3, 0.7).finished()));
  const PullbackMetricMatrix m = pullback_metric(builtin_f("BH"), x);
  ASSERT_EQ(m.pairs.size(), 1u);
  EXPECT_NEAR(m.theta1[0], 0.64, 1e-15);
  EXPECT_NEAR(m.theta2[0], 0.64, 1e-15);
  EXPECT_EQ(m.theta3.rows(), 1);
  EXPECT_EQ(m.theta3(0, 0), 0.0);
  EXPECT_NEAR(m.fisher(0, 0), 1.0 / 0.3, 1e-15);
  EXPECT_EQ(m.fisher(0, 1), 0.0);
}

TEST(PullbackMetric, DegeneratePairVanishes) {
  const UnfoldedPoint x(CMatrix::Identity(3, 3), ProbVector((RVector(3) << 0.25, 0.25, 0.5).finished()));
  const PullbackMetricMatrix m = pullback_metric(builtin_f("WY"), x);
  EXPECT_EQ(m.theta1[0], 0.0);
  EXPECT_GT(m.theta1[1], 0.0);
}

TEST(PullbackEval, MatchesDirectPath) {
  Rng rng(10);
  for (const auto& f : registry_f()) {
    for (int n = 2; n <= 4; ++n) {
      for (int trial = 0; trial < 20; ++trial) {
        const UnfoldedPoint x = random_unfolded_point(n, rng);
        const UnfoldedTangent t1 = random_unfolded_tangent(n, rng);
        const UnfoldedTangent t2 = random_unfolded_tangent(n, rng);
        const double direct = petz_metric(f, fold(x), tangent_map_pi(x, t1), tangent_map_pi(x, t2));
        const double lifted = pullback_eval(f, x, t1, t2);
        EXPECT_NEAR(lifted, direct, 1e-10 * std::max(1.0, std::abs(direct))) << f.name();
        EXPECT_NEAR(pullback_metric(f, x).evaluate(t1, t2), lifted, 1e-12 * std::max(1.0, std::abs(lifted)));
      }
    }
  }
}

TEST(PullbackEval, Theta3DirectionsGiveFisherRao) {
  Rng rng(11);
  for (const auto& f : registry_f()) {
    const int n = 4;
    const UnfoldedPoint x = random_unfolded_point(n, rng);
    const RVector a = random_zero_sum(n, rng);
    const RVector b = random_zero_sum(n, rng);
    for (const auto& label : su_basis_labels(n)) {
      if (label.kind != SuKind::kTau3) continue;
      const UnfoldedTangent t1{Hermitian(label.matrix(n)), a};
      const UnfoldedTangent t2{Hermitian(label.matrix(n)), b};
      const PullbackSplit split = pullback_split(f, x, t1, t2);
      EXPECT_EQ(split.quantum, 0.0);
      EXPECT_EQ(split.total(), fisher_rao(x.probabilities(), a, b));
    }
  }
}

TEST(PullbackEval, DimensionMismatch) {
  Rng rng(12);
  const UnfoldedPoint x = random_unfolded_point(3, rng);
  const UnfoldedTangent t = random_unfolded_tangent(2, rng);
  EXPECT_THROW(pullback_eval(builtin_f("BH"), x, t, t), DimensionMismatch);
}

TEST(SuCoordinates, ReconstructTraceless) {
  Rng rng(13);
  const int n = 4;
  const CMatrix h = random_tangent(n, rng).matrix();
  const RVector c = su_coordinates(h);
  const auto basis = su_basis(n);
  CMatrix back = CMatrix::Zero(n, n);
  for (std::size_t i = 0; i < basis.size(); ++i) back += c(static_cast<Eigen::Index>(i)) * basis[i].matrix();
  EXPECT_LT(max_abs(back - h), 1e-14);
}
