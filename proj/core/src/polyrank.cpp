#include "convstat/polyrank.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/SVD>

#include "convstat/covest.hpp"
#include "convstat/error.hpp"
#include "convstat/symlin.hpp"

namespace convstat {

namespace {

constexpr double kTrimTol = 1e-14;
constexpr double kUnstableSum = 1e-8;

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

// Drops vanishing top-degree coefficients; throws on the zero polynomial.
std::vector<double> trimmed(std::span<const double> v) {
  double scale = 0.0;
  for (double c : v) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) throw Error(ErrorKind::ZeroInput, "zero polynomial");
  std::size_t len = v.size();
  while (len > 1 && std::abs(v[len - 1]) <= kTrimTol * scale) --len;
  std::vector<double> out(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(len));
  for (double& c : out) c /= scale;
  return out;
}

std::size_t rank_above(const Eigen::VectorXd& sv, double tol, double* residual) {
  if (sv.size() == 0 || sv(0) == 0.0) {
    if (residual) *residual = 0.0;
    return 0;
  }
  std::size_t rank = 0;
  while (idx(rank) < sv.size() && sv(idx(rank)) > tol * sv(0)) ++rank;
  if (residual) *residual = sv(idx(rank) - 1) / sv(0);
  return rank;
}

// Least-squares recovery of g from v = p g, w = q g once deg g = d is known.
std::vector<double> recover_gcd(const std::vector<double>& v,
                                const std::vector<double>& w, std::size_t d) {
  const std::size_t a = v.size() - 1;
  const std::size_t b = w.size() - 1;
  Eigen::MatrixXd m(idx(a + b - d + 1), idx(a + b - 2 * d + 2));
  m << conv_matrix(w, a - d + 1), conv_matrix(v, b - d + 1);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const Eigen::VectorXd null = svd.matrixV().col(m.cols() - 1);

  const std::vector<double> p(null.data(), null.data() + (a - d + 1));
  std::vector<double> q(null.data() + (a - d + 1), null.data() + null.size());
  for (double& c : q) c = -c;

  Eigen::MatrixXd lhs(idx(a + b + 2), idx(d + 1));
  lhs << conv_matrix(p, d + 1), conv_matrix(q, d + 1);
  Eigen::VectorXd rhs(idx(a + b + 2));
  rhs << Eigen::Map<const Eigen::VectorXd>(v.data(), idx(v.size())),
      Eigen::Map<const Eigen::VectorXd>(w.data(), idx(w.size()));
  const Eigen::VectorXd g = lhs.colPivHouseholderQr().solve(rhs);
  return {g.data(), g.data() + g.size()};
}

std::vector<Pmv> leave_one_out_unchecked(std::span<const Pmv> pmvs) {
  const std::size_t k = pmvs.size();
  if (k == 1) return {Pmv({1.0})};
  std::vector<std::vector<double>> prefix(k + 1), suffix(k + 1);
  prefix[0] = {1.0};
  suffix[k] = {1.0};
  for (std::size_t i = 0; i < k; ++i) prefix[i + 1] = convolve(prefix[i], pmvs[i].probs());
  for (std::size_t i = k; i-- > 0;) suffix[i] = convolve(pmvs[i].probs(), suffix[i + 1]);
  std::vector<Pmv> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.emplace_back(convolve(prefix[i], suffix[i + 1]));
  return out;
}

std::size_t support_sum(std::span<const Pmv> pmvs) {
  std::size_t s = 0;
  for (const Pmv& p : pmvs) s += p.max_value();
  return s;
}

}  // namespace

GcdResult gcd_degree(std::span<const double> v_in, std::span<const double> w_in,
                     double tol) {
  const std::vector<double> v = trimmed(v_in);
  const std::vector<double> w = trimmed(w_in);
  const std::size_t a = v.size() - 1;
  const std::size_t b = w.size() - 1;
  GcdResult out;
  if (a == 0 || b == 0) return out;

  Eigen::MatrixXd m(idx(a + b + 1), idx(a + b + 2));
  m << conv_matrix(w, a + 1), conv_matrix(v, b + 1);
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
  const std::size_t rank = rank_above(sv, tol, &out.residual);
  out.degree = a + b + 1 - rank;
  if (out.degree == 0) return out;

  std::vector<double> g = recover_gcd(v, w, out.degree);
  const double sum = std::accumulate(g.begin(), g.end(), 0.0);
  double l1 = 0.0;
  for (double c : g) l1 += std::abs(c);
  if (std::abs(sum) < kUnstableSum * l1) {
    out.normalization_unstable = true;
    const double lead = g.back() < 0.0 ? -l1 : l1;
    for (double& c : g) c /= lead;
  } else {
    for (double& c : g) c /= sum;
  }
  out.gcd_coeffs = std::move(g);
  return out;
}

GcdResult gcd_many(std::span<const std::vector<double>> vs, double tol) {
  if (vs.size() < 2) {
    throw Error(ErrorKind::NeedTwoVariables, "gcd needs at least two polynomials");
  }
  GcdResult acc = gcd_degree(vs[0], vs[1], tol);
  for (std::size_t i = 2; i < vs.size(); ++i) {
    GcdResult next = gcd_degree(acc.gcd_coeffs, vs[i], tol);
    next.residual = std::min(next.residual, acc.residual);
    next.normalization_unstable = next.normalization_unstable || acc.normalization_unstable;
    acc = std::move(next);
  }
  return acc;
}

std::size_t common_divisor_degree(std::span<const std::vector<double>> vs,
                                  std::size_t ambient, double tol) {
  if (vs.empty()) throw Error(ErrorKind::NeedTwoVariables, "no polynomials");
  Eigen::Index rows = 0;
  for (const auto& v : vs) {
    if (v.empty() || v.size() > ambient) {
      throw Error(ErrorKind::DimensionMismatch, "polynomial longer than ambient space");
    }
    rows += idx(ambient - v.size() + 1);
  }
  Eigen::MatrixXd stacked(rows, idx(ambient));
  Eigen::Index at = 0;
  for (const auto& v : vs) {
    const std::size_t cols = ambient - v.size() + 1;
    Eigen::MatrixXd t = conv_matrix(v, cols).transpose();
    const double norm = t.norm();
    if (norm == 0.0) throw Error(ErrorKind::ZeroInput, "zero polynomial");
    stacked.middleRows(at, t.rows()) = t / norm;
    at += t.rows();
  }
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(stacked).singularValues();
  return ambient - rank_above(sv, tol, nullptr);
}

std::vector<Pmv> leave_one_out(std::span<const Pmv> pmvs) {
  if (pmvs.size() < 2) {
    throw Error(ErrorKind::NeedTwoVariables,
                "leave-one-out needs k >= 2, got " + std::to_string(pmvs.size()));
  }
  for (std::size_t i = 0; i < pmvs.size(); ++i) {
    if (pmvs[i].is_degenerate()) {
      throw Error(ErrorKind::DegenerateVariable,
                  "variable " + std::to_string(i) + " is a point mass");
    }
  }
  return leave_one_out_unchecked(pmvs);
}

RankReport covariance_rank(std::span<const Pmv> x,
                           std::optional<std::span<const Pmv>> y, double tol,
                           double rank_tol) {
  const std::size_t total = x.size() + (y ? y->size() : 0);
  if (x.empty() || total < 2 || (y && y->empty())) {
    throw Error(ErrorKind::NeedTwoVariables, "rank needs at least two variables");
  }
  auto check = [](std::span<const Pmv> side) {
    for (const Pmv& p : side) {
      if (p.is_degenerate()) throw Error(ErrorKind::DegenerateVariable, "point mass PMV");
    }
  };
  check(x);
  if (y) check(*y);

  RankReport rep;
  rep.s = support_sum(x);
  if (y && support_sum(*y) != rep.s) {
    throw Error(ErrorKind::DimensionMismatch,
                "x side s=" + std::to_string(rep.s) + " vs y side s=" +
                    std::to_string(support_sum(*y)));
  }

  std::vector<double> ones_x(x.size(), 1.0);
  SymMatrix cov = assemble_cov(x, ones_x);
  std::vector<std::vector<double>> blocks;
  for (const Pmv& p : leave_one_out_unchecked(x)) blocks.push_back(p.vector());
  if (y) {
    std::vector<double> ones_y(y->size(), 1.0);
    cov += assemble_cov(*y, ones_y);
    for (const Pmv& p : leave_one_out_unchecked(*y)) blocks.push_back(p.vector());
  }

  const EigenDecomp eig = eigh(cov);
  rep.eigenvalues = eig.values;
  rep.numeric_rank = numeric_rank(eig, rank_tol);
  rep.gcd_degree = common_divisor_degree(blocks, rep.s + 1, tol);

  std::size_t zeros = 0;
  bool interior = true;
  auto collect = [&](std::span<const Pmv> side) {
    for (const Pmv& p : side) {
      rep.zero_index_sets.push_back(p.zero_indices());
      zeros += rep.zero_index_sets.back().size();
      interior = interior && p.is_interior();
    }
  };
  collect(x);
  if (y) collect(*y);

  const std::size_t base = rep.s - std::min(rep.s, rep.gcd_degree);
  rep.lower_bound = base - std::min(base, zeros);
  if (interior) rep.analytic_rank = base;
  return rep;
}

}  // namespace convstat
