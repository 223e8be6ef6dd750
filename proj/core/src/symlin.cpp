#include "convstat/symlin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "convstat/error.hpp"

namespace convstat {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr int kMaxSweeps = 100;
constexpr double kJacobiTol = 1e-14;
constexpr double kSignTol = 1e-12;

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

void check_same_dim(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
}

// Sorts eigenpairs descending and fixes signs so results are reproducible.
EigenDecomp canonical_order(const Eigen::VectorXd& values,
                            const Eigen::MatrixXd& vectors) {
  const Eigen::Index n = values.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return values(a) > values(b);
  });

  EigenDecomp out{Eigen::VectorXd(n), Eigen::MatrixXd(n, n)};
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index src = order[static_cast<std::size_t>(j)];
    out.values(j) = values(src);
    Eigen::VectorXd v = vectors.col(src);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(v(i)) > kSignTol) {
        if (v(i) < 0.0) v = -v;
        break;
      }
    }
    out.vectors.col(j) = v;
  }
  return out;
}

}  // namespace

SymMatrix::SymMatrix(std::size_t dim)
    : a_(Eigen::MatrixXd::Zero(idx(dim), idx(dim))) {}

SymMatrix::SymMatrix(Eigen::MatrixXd a) : a_(std::move(a)) {
  if (a_.rows() != a_.cols()) {
    throw Error(ErrorKind::NotSymmetric, "matrix is not square");
  }
  const double scale = a_.size() == 0 ? 0.0 : a_.cwiseAbs().maxCoeff();
  const double gap = a_.size() == 0 ? 0.0 : (a_ - a_.transpose()).cwiseAbs().maxCoeff();
  if (gap > kSymmetryTol * scale) {
    throw Error(ErrorKind::NotSymmetric,
                "asymmetry " + std::to_string(gap) + " exceeds tolerance");
  }
  a_ = 0.5 * (a_ + a_.transpose()).eval();
}

SymMatrix SymMatrix::identity(std::size_t dim) {
  return SymMatrix(Eigen::MatrixXd::Identity(idx(dim), idx(dim)));
}

double SymMatrix::max_abs() const noexcept {
  return a_.size() == 0 ? 0.0 : a_.cwiseAbs().maxCoeff();
}

SymMatrix SymMatrix::padded(std::size_t dim) const {
  if (dim < this->dim()) {
    throw Error(ErrorKind::DimensionMismatch, "cannot pad to a smaller size");
  }
  SymMatrix out(dim);
  out.a_.topLeftCorner(a_.rows(), a_.cols()) = a_;
  return out;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& other) {
  check_same_dim(*this, other);
  a_ += other.a_;
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& other) {
  check_same_dim(*this, other);
  a_ -= other.a_;
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
  a_ *= s;
  return *this;
}

EigenDecomp eigh(const SymMatrix& a) {
  const Eigen::Index n = idx(a.dim());
  Eigen::MatrixXd m = a.mat();
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double threshold = kJacobiTol * m.norm();

  auto off_norm = [&m, n] {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) s += m(i, j) * m(i, j);
    return std::sqrt(s);
  };

  int sweep = 0;
  while (off_norm() > threshold) {
    if (++sweep > kMaxSweeps) {
      throw Error(ErrorKind::NoConvergence,
                  "Jacobi eigensolver exceeded " + std::to_string(kMaxSweeps) + " sweeps");
    }
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (apq == 0.0) continue;
        // Rotation angle that annihilates m(p, q); the smaller root keeps it stable.
        const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double mkp = m(k, p);
          const double mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double mpk = m(p, k);
          const double mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  return canonical_order(m.diagonal(), v);
}

std::size_t numeric_rank(const EigenDecomp& eig, double rel_tol) {
  if (eig.values.size() == 0) return 0;
  const double top = eig.values.cwiseAbs().maxCoeff();
  if (top == 0.0) return 0;
  return static_cast<std::size_t>(
      (eig.values.array() > rel_tol * top).count());
}

std::size_t numeric_rank(const SymMatrix& a, double rel_tol) {
  return numeric_rank(eigh(a), rel_tol);
}

SymMatrix rank_r_approx(const SymMatrix& a, std::size_t r) {
  if (r == 0 || r > a.dim()) {
    throw Error(ErrorKind::RankOutOfRange,
                "r=" + std::to_string(r) + " outside 1.." + std::to_string(a.dim()));
  }
  const EigenDecomp eig = eigh(a);
  const auto k = idx(r);
  const Eigen::MatrixXd p = eig.vectors.leftCols(k);
  return SymMatrix(p * eig.values.head(k).asDiagonal() * p.transpose());
}

SymMatrix pinv(const SymMatrix& a, double tol) {
  if (a.dim() == 0) return a;
  return rank_r_pinv(eigh(a), a.dim(), tol);
}

SymMatrix rank_r_pinv(const SymMatrix& a, std::size_t r, double tol) {
  return rank_r_pinv(eigh(a), r, tol);
}

SymMatrix rank_r_pinv(const EigenDecomp& eig, std::size_t r, double tol) {
  const auto n = eig.values.size();
  if (r == 0 || idx(r) > n) {
    throw Error(ErrorKind::RankOutOfRange,
                "r=" + std::to_string(r) + " outside 1.." + std::to_string(n));
  }
  const double top = eig.values.cwiseAbs().maxCoeff();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(n);
  for (Eigen::Index j = 0; j < idx(r); ++j) {
    const double lam = eig.values(j);
    if (std::abs(lam) > tol * top && lam != 0.0) inv(j) = 1.0 / lam;
  }
  return SymMatrix(eig.vectors * inv.asDiagonal() * eig.vectors.transpose());
}

double quad_form(const Eigen::VectorXd& v, const SymMatrix& a) {
  if (idx(a.dim()) != v.size()) {
    throw Error(ErrorKind::DimensionMismatch, "vector length " +
                    std::to_string(v.size()) + " vs matrix " + std::to_string(a.dim()));
  }
  return v.dot(a.mat() * v);
}

double quad_form(std::span<const double> v, const SymMatrix& a) {
  const Eigen::Map<const Eigen::VectorXd> w(v.data(), idx(v.size()));
  return quad_form(Eigen::VectorXd(w), a);
}

double chi2_sf(double t, int dof) {
  if (dof < 1) {
    throw Error(ErrorKind::DomainError, "degrees of freedom must be >= 1");
  }
  if (std::isnan(t) || t < 0.0) {
    throw Error(ErrorKind::DomainError, "chi2 statistic must be >= 0");
  }
  if (t == 0.0) return 1.0;
  if (std::isinf(t)) return 0.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * t);
}

}  // namespace convstat
