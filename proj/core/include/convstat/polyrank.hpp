#ifndef CONVSTAT_POLYRANK_HPP_
#define CONVSTAT_POLYRANK_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "convstat/pmv.hpp"

namespace convstat {

inline constexpr double kDefaultGcdTol = 1e-9;
inline constexpr double kDefaultRankTol = 1e-10;

/**
 * Greatest common divisor of two probability generating functions.
 *
 * Coefficient vectors are read lowest degree first, so a PMV is its own PGF.
 * The degree is the trustworthy part; the coefficients are a least-squares
 * reconstruction normalized to u(1) = 1.
 */
struct GcdResult {
  std::size_t degree = 0;
  std::vector<double> gcd_coeffs{1.0};
  /// sigma_rank / sigma_max of the Sylvester-type matrix; values near tol
  /// mark a borderline degree decision.
  double residual = 1.0;
  /// Set when the recovered gcd has u(1) close to zero, which makes the
  /// sum-to-one normalization meaningless.
  bool normalization_unstable = false;
};

GcdResult gcd_degree(std::span<const double> v, std::span<const double> w,
                     double tol = kDefaultGcdTol);

/// Left fold of gcd_degree over two or more polynomials.
GcdResult gcd_many(std::span<const std::vector<double>> vs,
                   double tol = kDefaultGcdTol);

/// Degree of the common divisor of polynomials living in R^{ambient}:
/// the nullity of the stacked conv_matrix(v_i, ambient - deg v_i)'.
std::size_t common_divisor_degree(std::span<const std::vector<double>> vs,
                                  std::size_t ambient,
                                  double tol = kDefaultGcdTol);

/// Element i is the convolution of every input except the i-th.
std::vector<Pmv> leave_one_out(std::span<const Pmv> pmvs);

struct RankReport {
  std::size_t s = 0;
  /// Present only when every PMV is interior.
  std::optional<std::size_t> analytic_rank;
  std::size_t lower_bound = 0;
  std::size_t numeric_rank = 0;
  std::size_t gcd_degree = 0;
  /// Per-variable zero cells, x side first then y side.
  std::vector<std::vector<std::size_t>> zero_index_sets;
  Eigen::VectorXd eigenvalues;
};

/**
 * Rank of Psi (y absent) or Psi + Xi (y present) for unit weights.
 *
 * For interior PMVs the rank is s - deg gcd of the leave-one-out
 * convolutions. Otherwise only the bound s - deg gcd - sum |L_i| holds.
 */
RankReport covariance_rank(std::span<const Pmv> x,
                           std::optional<std::span<const Pmv>> y = std::nullopt,
                           double tol = kDefaultGcdTol,
                           double rank_tol = kDefaultRankTol);

}  // namespace convstat

#endif  // CONVSTAT_POLYRANK_HPP_
