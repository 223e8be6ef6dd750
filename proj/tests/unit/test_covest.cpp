#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "convstat/covest.hpp"
#include "convstat/polyrank.hpp"
#include "support/expect.hpp"
#include "support/oracles.hpp"

using namespace convstat;
using testutil::expect_near_vec;
using testutil::kind_of;

namespace {

// Delta method at p = q = 1/2: d(x1*x2)_0 = -(da + db)/2 and d(x1*x2)_1 = 0,
// with Var(sqrt(m) da) = 1/4, so Psi_00 = 2 * (1/2)^2 * (1/4) = 1/8.
Eigen::Matrix3d fair_coin_psi() {
  Eigen::Matrix3d m;
  m << 0.125, 0.0, -0.125, 0.0, 0.0, 0.0, -0.125, 0.0, 0.125;
  return m;
}

double min_eigenvalue(const SymMatrix& a) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a.mat()).eigenvalues()(0);
}

EmpiricalPmv emp(std::vector<std::int64_t> xs, std::size_t r) { return empirical_pmv(xs, r); }

}  // namespace

TEST(WeightsFromSizes, Examples) {
  const std::vector<std::size_t> eq{10, 10, 10};
  expect_near_vec(weights_from_sizes(eq), {1.0, 1.0, 1.0}, 0.0);
  const std::vector<std::size_t> two{10, 20};
  expect_near_vec(weights_from_sizes(two), {1.0, 0.5}, 0.0);
  const std::vector<std::size_t> three{15, 10, 40};
  expect_near_vec(weights_from_sizes(three), {2.0 / 3.0, 1.0, 0.25}, 1e-15);
  EXPECT_EQ(kind_of([] { weights_from_sizes(std::vector<std::size_t>{}); }), ErrorKind::EmptySizes);
}

TEST(Psi, FairCoins) {
  const SymMatrix p = psi({{Pmv({0.5, 0.5}), Pmv({0.5, 0.5})}, {1.0, 1.0}, Side::GF});
  EXPECT_LT((p.mat() - Eigen::MatrixXd(fair_coin_psi())).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(numeric_rank(p, 1e-10), 1u);
}

TEST(Psi, CoprimeHasFullRank) {
  const SymMatrix p = psi({{Pmv({0.7, 0.3}), Pmv({0.2, 0.8})}, {1.0, 1.0}, Side::GF});
  EXPECT_EQ(numeric_rank(p, 1e-10), 2u);
}

TEST(Psi, Errors) {
  EXPECT_EQ(kind_of([] { psi({{Pmv({0.5, 0.5}), Pmv({1.0, 0.0})}, {1.0, 1.0}, Side::GF}); }),
            ErrorKind::DegenerateVariable);
  EXPECT_EQ(kind_of([] { psi({{Pmv({0.5, 0.5})}, {1.0}, Side::GF}); }),
            ErrorKind::NeedTwoVariables);
  EXPECT_EQ(kind_of([] { psi({{Pmv({0.5, 0.5}), Pmv({0.5, 0.5})}, {1.0, 0.0}, Side::GF}); }),
            ErrorKind::InvalidCoefficient);
}

TEST(Psi, KernelAndPsdOnRandomModels) {
  std::mt19937_64 gen(41);
  std::uniform_real_distribution<double> c(0.1, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    CovSpec spec;
    for (int i = 0; i < 2 + trial % 3; ++i) {
      spec.pmvs.emplace_back(oracle::random_pmv(gen, 1 + gen() % 3, trial % 2 == 0));
      spec.weights.push_back(c(gen));
    }
    const SymMatrix p = psi(spec);
    const Eigen::VectorXd rows = p.mat().rowwise().sum();
    EXPECT_LT(rows.cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_GE(min_eigenvalue(p), -1e-10);
  }
}

TEST(PsiHat, AllPointMassesGiveZero) {
  const std::vector<EmpiricalPmv> x{emp({0, 0}, 1), emp({1, 1}, 1)};
  EXPECT_TRUE(psi_hat(x).is_zero());
}

TEST(PsiHat, FairCoinSamplesMatchPsi) {
  const std::vector<EmpiricalPmv> x{emp({0, 1}, 1), emp({0, 1}, 1)};
  EXPECT_LT((psi_hat(x).mat() - Eigen::MatrixXd(fair_coin_psi())).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PsiHat, UnequalSizesUseWeights) {
  const std::vector<EmpiricalPmv> x{emp({0, 1, 0, 1}, 1), emp({0, 1}, 1)};
  const SymMatrix got = psi_hat(x);
  const SymMatrix want = psi({{Pmv({0.5, 0.5}), Pmv({0.5, 0.5})}, {0.5, 1.0}, Side::GF});
  EXPECT_LT((got.mat() - want.mat()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Xi, SingleVariableIsSigma) {
  const Pmv y({0.14, 0.62, 0.24});
  const SymMatrix x1 = xi({{y}, {1.0}, Side::ED});
  EXPECT_LT((x1.mat() - multinomial_cov(y).mat()).cwiseAbs().maxCoeff(), 1e-15);
  const SymMatrix half = xi({{y}, {0.5}, Side::ED});
  EXPECT_LT((half.mat() - 0.5 * multinomial_cov(y).mat()).cwiseAbs().maxCoeff(), 1e-15);
  const SymMatrix two = xi({{Pmv({0.5, 0.5}), Pmv({0.5, 0.5})}, {1.0, 1.0}, Side::ED});
  EXPECT_LT((two.mat() - Eigen::MatrixXd(fair_coin_psi())).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(kind_of([] { xi({{}, {}, Side::ED}); }), ErrorKind::EmptyProduct);
}

TEST(XiHat, MatchesXiAtEmpiricalPmvs) {
  const std::vector<EmpiricalPmv> y{emp({0, 1, 2, 1, 1}, 2)};
  const SymMatrix got = xi_hat(y);
  EXPECT_LT((got.mat() - multinomial_cov(y[0].pmv).mat()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Upsilon, FairCoins) {
  const std::vector<Pmv> x{Pmv({0.5, 0.5}), Pmv({0.5, 0.5})};
  const SymMatrix u = upsilon(x);
  const SymMatrix expected =
      multinomial_cov(Pmv({0.25, 0.5, 0.25})) - SymMatrix(Eigen::MatrixXd(fair_coin_psi()));
  EXPECT_LT((u.mat() - expected.mat()).cwiseAbs().maxCoeff(), 1e-15);
  // Hand value: (1/16) w w' with w = (1, -2, 1).
  Eigen::Vector3d w(1.0, -2.0, 1.0);
  EXPECT_LT((u.mat() - w * w.transpose() / 16.0).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(numeric_rank(u, 1e-10), 1u);
}

// Both the all-ones vector and the support vector (0, 1, ..., s) lie in the
// kernel: v' Sigma(z) v = Var(sum) = sum Var(X_i) = v' Psi v under
// independence. Hence rank(Upsilon) = s - 1, one below the full rank s.
TEST(Upsilon, PsdWithTwoDimensionalKernel) {
  std::mt19937_64 gen(42);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Pmv> x;
    std::size_t s = 0;
    for (int i = 0; i < 2 + trial % 2; ++i) {
      x.emplace_back(oracle::random_pmv(gen, 1 + gen() % 2));
      s += x.back().max_value();
    }
    const SymMatrix u = upsilon(x);
    EXPECT_GE(min_eigenvalue(u), -1e-10);
    EXPECT_EQ(numeric_rank(u, 1e-10), s - 1);
    const Eigen::VectorXd support = Eigen::VectorXd::LinSpaced(s + 1, 0.0, double(s));
    EXPECT_LT((u.mat() * support).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((u.mat() * Eigen::VectorXd::Ones(s + 1)).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(UpsilonHat, Cases) {
  const std::vector<std::vector<std::int64_t>> same{{1, 1, 1}, {0, 0, 0}};
  EXPECT_TRUE(upsilon_hat(same).is_zero());
  const std::vector<std::vector<std::int64_t>> ragged{{0, 1}, {0, 1, 1}};
  EXPECT_EQ(kind_of([&] { upsilon_hat(ragged); }), ErrorKind::NotPaired);
  const std::vector<std::vector<std::int64_t>> single{{0, 1}};
  EXPECT_EQ(kind_of([&] { upsilon_hat(single); }), ErrorKind::NeedTwoVariables);
}

TEST(UpsilonHat, ApproachesUpsilonForIndependentColumns) {
  std::mt19937_64 gen(43);
  const std::size_t m = 200000;
  std::bernoulli_distribution a(0.3), b(0.8);
  std::vector<std::vector<std::int64_t>> cols(2, std::vector<std::int64_t>(m));
  for (std::size_t j = 0; j < m; ++j) {
    cols[0][j] = a(gen);
    cols[1][j] = b(gen);
  }
  const std::vector<Pmv> truth{Pmv({0.7, 0.3}), Pmv({0.2, 0.8})};
  const SymMatrix diff = upsilon_hat(cols) - upsilon(truth);
  EXPECT_LT(diff.max_abs(), 0.01);
}

TEST(PsiHat, ConsistentAtLargeM) {
  // Binomial counts are the sufficient statistic of a Bernoulli sample.
  std::mt19937_64 gen(44);
  const std::size_t m = 100000;
  const SymMatrix truth = psi({{Pmv({0.7, 0.3}), Pmv({0.2, 0.8})}, {1.0, 1.0}, Side::GF});
  std::binomial_distribution<std::size_t> b1(m, 0.3), b2(m, 0.8);
  int within = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const double p1 = static_cast<double>(b1(gen)) / m;
    const double p2 = static_cast<double>(b2(gen)) / m;
    const std::vector<EmpiricalPmv> x{{Pmv({1.0 - p1, p1}), m}, {Pmv({1.0 - p2, p2}), m}};
    within += (psi_hat(x) - truth).max_abs() < 0.01;
  }
  EXPECT_GE(within, 99);
}

// The sample covariance of V_m = sqrt(m)(x1_hat * x2_hat - z) over L
// replicates must match Psi entrywise within 3 standard errors.
TEST(Psi, MatchesMonteCarloCovarianceOfVm) {
  std::mt19937_64 gen(45);
  const std::size_t m = 10000;
  const int L = 10000;
  const double p = 0.3, q = 0.8;
  const Pmv z = convolve(Pmv({1 - p, p}), Pmv({1 - q, q}));
  const SymMatrix truth = psi({{Pmv({1 - p, p}), Pmv({1 - q, q})}, {1.0, 1.0}, Side::GF});
  std::binomial_distribution<std::size_t> b1(m, p), b2(m, q);
  std::vector<Eigen::Vector3d> vs(L);
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (auto& v : vs) {
    const double a = static_cast<double>(b1(gen)) / m;
    const double b = static_cast<double>(b2(gen)) / m;
    const auto c = convolve(Pmv({1 - a, a}), Pmv({1 - b, b})).vector();
    for (int j = 0; j < 3; ++j) v(j) = std::sqrt(static_cast<double>(m)) * (c[j] - z[j]);
    mean += v;
  }
  mean /= L;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double s1 = 0.0, s2 = 0.0;
      for (const auto& v : vs) {
        const double prod = (v(i) - mean(i)) * (v(j) - mean(j));
        s1 += prod;
        s2 += prod * prod;
      }
      const double cov = s1 / L;
      const double se = std::sqrt((s2 / L - cov * cov) / L);
      EXPECT_NEAR(cov, truth(i, j), 3.0 * se + 1e-12) << i << "," << j;
    }
  }
}
