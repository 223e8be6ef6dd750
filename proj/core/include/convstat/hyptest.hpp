#ifndef CONVSTAT_HYPTEST_HPP_
#define CONVSTAT_HYPTEST_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "convstat/pmv.hpp"
#include "convstat/polyrank.hpp"
#include "convstat/symlin.hpp"

namespace convstat {

/// Raw observations of one variable together with its coefficient a_i.
struct RawVariable {
  std::string id;
  std::vector<double> values;
  std::int64_t coefficient = 1;
  /// Known largest value of the canonical variable; overrides the data.
  std::optional<std::size_t> support;
};

/// Observations for a linear combination a_0 + sum a_i A_i on the lattice
/// zeta * Z.
struct SampleSet {
  std::vector<RawVariable> variables;
  double offset = 0.0;
  double lattice = 1.0;
};

/// Non-negative integer observations with the canonical support {0..support_max}.
struct CanonicalVariable {
  std::string id;
  std::vector<std::int64_t> values;
  std::size_t support_max = 0;
  /// Observed minimum of a_i * value / zeta that was subtracted.
  std::int64_t shift = 0;
};

struct CanonicalSamples {
  std::vector<CanonicalVariable> variables;
  /// offset / zeta + sum of shifts.
  std::int64_t total_offset = 0;
};

/**
 * Reduces a SampleSet to non-negative integer variables whose observed
 * minimum is zero. Throws LatticeViolation for values off the lattice and
 * InvalidCoefficient for a zero coefficient.
 */
CanonicalSamples canonicalize(const SampleSet& raw);

struct RankPolicy {
  enum class Kind { Analytic, Numeric, Fixed, LowerBound };
  Kind kind = Kind::Analytic;
  /// Only meaningful for Fixed.
  std::size_t r = 0;

  static RankPolicy analytic() { return {Kind::Analytic, 0}; }
  static RankPolicy numeric() { return {Kind::Numeric, 0}; }
  static RankPolicy fixed(std::size_t r) { return {Kind::Fixed, r}; }
  static RankPolicy lower_bound() { return {Kind::LowerBound, 0}; }

  /// Accepts "analytic", "numeric", "lower", "lower_bound" and "fixed:N".
  static RankPolicy parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const RankPolicy&, const RankPolicy&) = default;
};

struct TestOptions {
  double pinv_tol = kDefaultPinvTol;
  double rank_tol = kDefaultRankTol;
  double gcd_tol = kDefaultGcdTol;
};

struct TestReport {
  std::string test;
  double statistic = 0.0;
  std::size_t dof = 1;
  double p_value = 1.0;
  RankPolicy policy;
  bool fallback_used = false;
  /// Offsets of the two sides disagree, so H0 is impossible.
  bool deterministic_rejection = false;
  /// Shorter side was zero-padded in an equality-in-distribution test.
  bool padded = false;
  std::size_t s = 0;
  std::size_t m = 0;
  std::vector<double> eigenvalues;
  std::size_t numeric_rank = 0;
  std::optional<std::size_t> analytic_rank;
  std::size_t lower_bound = 0;
  std::int64_t x_offset = 0;
  std::optional<std::int64_t> y_offset;
  std::vector<std::string> warnings;

  friend bool operator==(const TestReport&, const TestReport&) = default;
};

/**
 * Goodness of fit of sum X_i to z, with z indexed on the canonical support
 * {0..s}. The statistic is V' (Psi_hat^r)^+ V with V = sqrt(m)(x_hat - z);
 * when every empirical PMV is a point mass Pearson's statistic is used.
 */
TestReport gof_test(std::span<const CanonicalVariable> x, const Pmv& z,
                    RankPolicy policy = {}, const TestOptions& opts = {});
TestReport gof_test(const CanonicalSamples& x, const Pmv& z,
                    RankPolicy policy = {}, const TestOptions& opts = {});

/// Equality in distribution of sum X_i and sum Y_j. Offsets are compared
/// first; a mismatch is a deterministic rejection.
TestReport ed_test(std::span<const CanonicalVariable> x,
                   std::span<const CanonicalVariable> y,
                   RankPolicy policy = {}, const TestOptions& opts = {});
TestReport ed_test(const CanonicalSamples& x, const CanonicalSamples& y,
                   RankPolicy policy = {}, const TestOptions& opts = {});

/// Sub-independence from paired rows; columns[i] holds variable i. The
/// statistic always uses the full rank s.
TestReport subind_test(std::span<const std::vector<std::int64_t>> columns,
                       std::span<const std::size_t> supports = {},
                       const TestOptions& opts = {});

/// Row sums over the first min(n_i) observations of every variable, in input
/// order. Discarded observations are reported through `warnings`.
std::vector<std::int64_t> paired_sums(std::span<const CanonicalVariable> vars,
                                      std::vector<std::string>* warnings = nullptr);

/// Pearson goodness of fit on summed observations against z on {0..s}.
TestReport pearson_gof(std::span<const std::int64_t> sums, const Pmv& z);

/// Two-sample Pearson statistic on the union support. Cells empty in both
/// samples are dropped with a warning.
TestReport pearson_ed(std::span<const std::int64_t> x_sums,
                      std::span<const std::int64_t> y_sums);

/// True model for the oracle statistics Z^GF and Z^ED.
struct OracleModel {
  std::vector<Pmv> x;
  /// Y side, optional.
  std::vector<Pmv> y;
  /// Hypothesized z for the GF statistic; defaults to conv(x).
  std::optional<Pmv> z;
  /// Sample sizes behind the weights c_i; empty means equal sizes.
  std::vector<std::size_t> x_sizes;
  std::vector<std::size_t> y_sizes;
};

struct OracleReports {
  TestReport gf;
  std::optional<TestReport> ed;
};

/// Statistics using the true covariance, rank r pseudo-inverse with dof r.
/// r = 0 selects the true rank of the matrix.
OracleReports oracle_statistics(const OracleModel& model,
                                std::span<const CanonicalVariable> x,
                                std::span<const CanonicalVariable> y,
                                std::size_t r = 0, const TestOptions& opts = {});

/// Precomputed true-covariance pseudo-inverses, reusable across replicates.
class OracleEngine {
 public:
  OracleEngine(const OracleModel& model, std::size_t r, const TestOptions& opts = {});

  TestReport gf(std::span<const CanonicalVariable> x) const;
  TestReport ed(std::span<const CanonicalVariable> x,
                std::span<const CanonicalVariable> y) const;
  bool has_ed() const noexcept { return !model_.y.empty(); }

 private:
  OracleModel model_;
  Pmv z_;
  std::size_t s_ = 0;
  std::size_t r_gf_ = 0;
  std::size_t r_ed_ = 0;
  SymMatrix pinv_gf_;
  SymMatrix pinv_ed_;
  std::vector<double> eig_gf_;
  std::vector<double> eig_ed_;
};

}  // namespace convstat

#endif  // CONVSTAT_HYPTEST_HPP_
