#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "convstat/symlin.hpp"
#include "support/expect.hpp"
#include "support/oracles.hpp"

using namespace convstat;
using testutil::kind_of;

namespace {

SymMatrix diag(std::initializer_list<double> d) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v(i++) = x;
  return SymMatrix(Eigen::MatrixXd(v.asDiagonal()));
}

SymMatrix coin_cov() {
  Eigen::Matrix2d a;
  a << 0.25, -0.25, -0.25, 0.25;
  return SymMatrix(Eigen::MatrixXd(a));
}

SymMatrix random_psd(std::mt19937_64& gen, int n, int rank) {
  std::normal_distribution<double> d;
  Eigen::MatrixXd b(n, rank);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < rank; ++j) b(i, j) = d(gen);
  return SymMatrix(Eigen::MatrixXd(b * b.transpose()));
}

}  // namespace

TEST(SymMatrix, RejectsAsymmetric) {
  Eigen::Matrix2d a;
  a << 1.0, 0.5, 0.4, 1.0;
  EXPECT_EQ(kind_of([&] { SymMatrix{Eigen::MatrixXd(a)}; }), ErrorKind::NotSymmetric);
}

TEST(SymMatrix, SymmetrizesRoundoff) {
  Eigen::Matrix2d a;
  a << 1.0, 0.5, 0.5 + 1e-14, 1.0;
  const SymMatrix s{Eigen::MatrixXd(a)};
  EXPECT_EQ(s(0, 1), s(1, 0));
}

TEST(Eigh, Diagonal) {
  const EigenDecomp e = eigh(diag({3.0, 1.0}));
  EXPECT_NEAR(e.values(0), 3.0, 1e-15);
  EXPECT_NEAR(e.values(1), 1.0, 1e-15);
  EXPECT_TRUE(e.vectors.isIdentity(1e-15));
}

TEST(Eigh, CoinCovarianceClosedForm) {
  const EigenDecomp e = eigh(coin_cov());
  EXPECT_NEAR(e.values(0), 0.5, 1e-15);
  EXPECT_NEAR(e.values(1), 0.0, 1e-15);
  const double h = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(e.vectors(0, 0), h, 1e-15);
  EXPECT_NEAR(e.vectors(1, 0), -h, 1e-15);
  EXPECT_NEAR(e.vectors(0, 1), h, 1e-15);
  EXPECT_NEAR(e.vectors(1, 1), h, 1e-15);
}

TEST(Eigh, ZeroMatrix) {
  const EigenDecomp e = eigh(SymMatrix(3));
  EXPECT_TRUE(e.values.isZero(0.0));
}

TEST(Eigh, AgreesWithEigenSolverAndReconstructs) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 9;
    const SymMatrix a = random_psd(gen, n, 1 + trial % n);
    const EigenDecomp e = eigh(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(a.mat());
    const Eigen::VectorXd ref_desc = ref.eigenvalues().reverse();
    const double scale = std::max(1.0, a.max_abs());
    EXPECT_LT((e.values - ref_desc).cwiseAbs().maxCoeff(), 1e-10 * scale);
    for (Eigen::Index i = 1; i < e.values.size(); ++i) EXPECT_GE(e.values(i - 1), e.values(i));
    const Eigen::MatrixXd rec = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
    EXPECT_LT((rec - a.mat()).cwiseAbs().maxCoeff(), 1e-10 * scale);
    const Eigen::MatrixXd gram = e.vectors.transpose() * e.vectors;
    EXPECT_LT((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Eigh, SignConvention) {
  std::mt19937_64 gen(8);
  const EigenDecomp e = eigh(random_psd(gen, 5, 5));
  for (Eigen::Index j = 0; j < e.vectors.cols(); ++j) {
    for (Eigen::Index i = 0; i < e.vectors.rows(); ++i) {
      if (std::abs(e.vectors(i, j)) > 1e-12) {
        EXPECT_GT(e.vectors(i, j), 0.0);
        break;
      }
    }
  }
}

TEST(RankApprox, Examples) {
  EXPECT_TRUE(rank_r_approx(diag({3.0, 1.0}), 1).mat().isApprox(diag({3.0, 0.0}).mat()));
  EXPECT_TRUE(rank_r_approx(diag({3.0, 1.0}), 2).mat().isApprox(diag({3.0, 1.0}).mat()));
  EXPECT_LT((rank_r_approx(coin_cov(), 1).mat() - coin_cov().mat()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(kind_of([] { rank_r_approx(diag({1.0, 2.0}), 0); }), ErrorKind::RankOutOfRange);
  EXPECT_EQ(kind_of([] { rank_r_approx(diag({1.0, 2.0}), 3); }), ErrorKind::RankOutOfRange);
}

// Eckart-Young-Mirsky: no symmetric rank-1 matrix u u' (or -u u') on a grid
// is closer in Frobenius norm than the truncated eigendecomposition.
TEST(RankApprox, BeatsGridCompetitors) {
  std::mt19937_64 gen(12);
  for (int n : {2, 3}) {
    const SymMatrix a = random_psd(gen, n, n);
    const double best = (a.mat() - rank_r_approx(a, 1).mat()).norm();
    const int steps = n == 2 ? 200 : 40;
    const double pi = std::acos(-1.0);
    for (int i = 0; i <= steps; ++i) {
      for (int j = 0; j <= (n == 2 ? 0 : steps); ++j) {
        const double th = pi * i / steps;
        const double ph = pi * j / std::max(1, steps);
        Eigen::VectorXd u(n);
        if (n == 2) {
          u << std::cos(th), std::sin(th);
        } else {
          u << std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th);
        }
        const double lam = u.dot(a.mat() * u);
        for (double scale : {0.5, 0.9, 1.0, 1.1, 1.5}) {
          const double d = (a.mat() - scale * lam * u * u.transpose()).norm();
          EXPECT_GE(d, best - 1e-12);
        }
      }
    }
  }
}

TEST(Pinv, Examples) {
  EXPECT_TRUE(pinv(diag({2.0, 0.0})).mat().isApprox(diag({0.5, 0.0}).mat()));
  Eigen::Matrix2d expected;
  expected << 1.0, -1.0, -1.0, 1.0;
  EXPECT_LT((pinv(coin_cov()).mat() - expected).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_TRUE(pinv(SymMatrix::identity(4)).mat().isIdentity(1e-15));
  EXPECT_TRUE(pinv(SymMatrix(3)).is_zero());
}

TEST(Pinv, MoorePenroseConditions) {
  std::mt19937_64 gen(13);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 7;
    const SymMatrix a = random_psd(gen, n, 1 + trial % n);
    const Eigen::MatrixXd& A = a.mat();
    const Eigen::MatrixXd P = pinv(a).mat();
    // Residuals scale with the norms of the factors.
    const double na = std::max(1.0, A.cwiseAbs().maxCoeff());
    const double np = std::max(1.0, P.cwiseAbs().maxCoeff());
    EXPECT_LT((A * P * A - A).cwiseAbs().maxCoeff(), 1e-10 * na * na * np);
    EXPECT_LT((P * A * P - P).cwiseAbs().maxCoeff(), 1e-10 * np * np * na);
    EXPECT_LT(((A * P) - (A * P).transpose()).cwiseAbs().maxCoeff(), 1e-10 * na * np);
    EXPECT_LT(((P * A) - (P * A).transpose()).cwiseAbs().maxCoeff(), 1e-10 * na * np);
  }
}

TEST(QuadForm, Examples) {
  const std::vector<double> ones{1.0, 1.0};
  EXPECT_DOUBLE_EQ(quad_form(ones, SymMatrix::identity(2)), 2.0);
  Eigen::Matrix2d a;
  a << 1.0, -1.0, -1.0, 1.0;
  const std::vector<double> v{1.0, -1.0};
  EXPECT_DOUBLE_EQ(quad_form(v, SymMatrix(Eigen::MatrixXd(a))), 4.0);
  const std::vector<double> zero{0.0, 0.0};
  EXPECT_DOUBLE_EQ(quad_form(zero, SymMatrix(Eigen::MatrixXd(a))), 0.0);
  const std::vector<double> bad{1.0};
  EXPECT_EQ(kind_of([&] { quad_form(bad, SymMatrix::identity(2)); }), ErrorKind::DimensionMismatch);
}

TEST(Chi2Sf, Values) {
  EXPECT_EQ(chi2_sf(0.0, 1), 1.0);
  EXPECT_EQ(chi2_sf(0.0, 7), 1.0);
  EXPECT_NEAR(chi2_sf(3.841459, 1), 0.05, 1e-4);
  EXPECT_NEAR(chi2_sf(3.841459, 1), oracle::chi2_1_tail(3.841459), 1e-9);
  EXPECT_NEAR(chi2_sf(5.991465, 2), 0.05, 1e-4);
  for (double t = 0.0; t <= 50.0; t += 0.25) EXPECT_NEAR(chi2_sf(t, 2), std::exp(-t / 2), 1e-12);
  for (double t : {0.1, 1.0, 2.5, 7.0}) EXPECT_NEAR(chi2_sf(t, 1), oracle::chi2_1_tail(t), 1e-9);
}

TEST(Chi2Sf, Errors) {
  EXPECT_EQ(kind_of([] { chi2_sf(-1.0, 2); }), ErrorKind::DomainError);
  EXPECT_EQ(kind_of([] { chi2_sf(1.0, 0); }), ErrorKind::DomainError);
}
