#ifndef CONVSTAT_SYMLIN_HPP_
#define CONVSTAT_SYMLIN_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace convstat {

/**
 * Dense symmetric matrix.
 *
 * Construction checks |A_ij - A_ji| <= 1e-12 * max|A| and stores the exactly
 * symmetrized average, so downstream code can rely on bit-level symmetry.
 */
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t dim);
  explicit SymMatrix(Eigen::MatrixXd a);

  static SymMatrix identity(std::size_t dim);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(a_.rows()); }
  const Eigen::MatrixXd& mat() const noexcept { return a_; }
  double operator()(std::size_t i, std::size_t j) const {
    return a_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  bool is_zero() const noexcept { return a_.isZero(0.0); }
  double max_abs() const noexcept;

  /// Copy embedded in the top-left corner of a larger zero matrix.
  SymMatrix padded(std::size_t dim) const;

  SymMatrix& operator+=(const SymMatrix& other);
  SymMatrix& operator-=(const SymMatrix& other);
  SymMatrix& operator*=(double s);

  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }

 private:
  Eigen::MatrixXd a_;
};

/// A = V diag(values) V', values descending, V orthonormal columns.
/// Each eigenvector's first component above 1e-12 in magnitude is positive.
struct EigenDecomp {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

/// Cyclic Jacobi rotations; stops when the off-diagonal Frobenius norm falls
/// below 1e-14 * ||A||_F. Throws NoConvergence after 100 sweeps.
EigenDecomp eigh(const SymMatrix& a);

/// Number of eigenvalues strictly above rel_tol * max|lambda|.
std::size_t numeric_rank(const EigenDecomp& eig, double rel_tol);
std::size_t numeric_rank(const SymMatrix& a, double rel_tol);

/// Keeps the r algebraically largest eigenpairs. Requires 0 < r <= dim.
SymMatrix rank_r_approx(const SymMatrix& a, std::size_t r);

inline constexpr double kDefaultPinvTol = 1e-15;

/// Moore-Penrose inverse; eigenvalues with |lambda| <= tol * max|lambda| are
/// treated as zero.
SymMatrix pinv(const SymMatrix& a, double tol = kDefaultPinvTol);

/// pinv(rank_r_approx(a, r), tol) from a single eigendecomposition.
SymMatrix rank_r_pinv(const SymMatrix& a, std::size_t r,
                      double tol = kDefaultPinvTol);
SymMatrix rank_r_pinv(const EigenDecomp& eig, std::size_t r,
                      double tol = kDefaultPinvTol);

double quad_form(std::span<const double> v, const SymMatrix& a);
double quad_form(const Eigen::VectorXd& v, const SymMatrix& a);

/// P(chi2(dof) >= t), the regularized upper incomplete gamma Q(dof/2, t/2).
double chi2_sf(double t, int dof);

}  // namespace convstat

#endif  // CONVSTAT_SYMLIN_HPP_
