#ifndef CONVSTAT_PMV_HPP_
#define CONVSTAT_PMV_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace convstat {

class SymMatrix;

/**
 * Probability mass vector on the integer support {0, ..., r}.
 *
 * Entries are non-negative and sum to one within 1e-12. A PMV whose mass sits
 * on a single cell is representable but reported as degenerate; statistic
 * code refuses degenerate true PMVs and uses the fallback path for
 * degenerate empirical ones.
 */
class Pmv {
 public:
  /// Sums within 1e-9 of one are accepted; the vector is renormalized only
  /// when the drift exceeds 1e-12, so exact inputs stay bit-identical.
  explicit Pmv(std::vector<double> probs);

  static Pmv point_mass(std::size_t r, std::size_t at = 0);

  std::span<const double> probs() const noexcept { return probs_; }
  const std::vector<double>& vector() const noexcept { return probs_; }
  double operator[](std::size_t u) const { return probs_[u]; }

  std::size_t size() const noexcept { return probs_.size(); }
  /// Largest support value r.
  std::size_t max_value() const noexcept { return probs_.size() - 1; }

  /// All mass on one cell.
  bool is_degenerate() const noexcept;
  /// Every entry strictly positive.
  bool is_interior() const noexcept;
  /// Indices of the zero entries.
  std::vector<std::size_t> zero_indices() const;

  friend bool operator==(const Pmv&, const Pmv&) = default;

 private:
  std::vector<double> probs_;
};

/// Maximum-likelihood estimate of a PMV from integer observations.
struct EmpiricalPmv {
  Pmv pmv;
  std::size_t n;
};

EmpiricalPmv empirical_pmv(std::span<const std::int64_t> samples,
                           std::size_t r);

/// Raw discrete convolution, usable for PMVs and for polynomial coefficients.
std::vector<double> convolve(std::span<const double> a,
                             std::span<const double> b);

Pmv convolve(const Pmv& a, const Pmv& b);

/// Left fold of convolve. Throws EmptyProduct on an empty input.
Pmv convolve_all(std::span<const Pmv> pmvs);

/**
 * Matrix of convolution by v acting on (cols)-dimensional vectors.
 *
 * Column j holds v shifted down by j rows, so for v of length a+1 the result
 * is (a+cols) x cols and conv_matrix(v, w.size()) * w == convolve(v, w).
 */
Eigen::MatrixXd conv_matrix(std::span<const double> v, std::size_t cols);

/// Covariance diag(v) - v v' of a single multinomial draw.
SymMatrix multinomial_cov(const Pmv& v);

}  // namespace convstat

#endif  // CONVSTAT_PMV_HPP_
