#ifndef CONVSTAT_SIMLAB_HPP_
#define CONVSTAT_SIMLAB_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "convstat/pmv.hpp"

namespace convstat {

/// (1 - rho) x1*x2 + rho (1 - a, 0, a) with a = pq + sqrt(pq(1-p)(1-q)),
/// for x1 ~ Bernoulli(p), x2 ~ Bernoulli(q). a is P(Z1 = Z2 = 1) for
/// Bernoulli variables with correlation one; the middle cell is emptied at
/// rho = 1, so the two-point endpoint matches a correlated pair only when
/// p = q. With require_interior, a zero cell throws ModelDegenerate.
Pmv z_rho(double p, double q, double rho, bool require_interior = false);

struct StatisticId {
  enum class Family { C, Z, P };
  enum class Test { GF, ED };
  Family family = Family::C;
  /// 1 or 2 for C and Z; unused for P.
  std::size_t r = 2;
  Test test = Test::GF;

  /// "C1_GF", "Z2_ED", "P_GF", ...
  static StatisticId parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const StatisticId&, const StatisticId&) = default;
};

struct SimScenario {
  double p = 0.3;
  double q = 0.8;
  double rho = 0.0;
  std::size_t n1 = 1000;
  std::size_t n2 = 1000;
  std::size_t n3 = 1000;
  std::size_t L = 10000;
  double alpha = 0.05;
  std::vector<StatisticId> statistics;
  std::uint64_t seed = 1;

  /// Throws InvalidScenario when a field is out of range.
  void validate() const;
};

/// Raw data of one replicate.
struct Replicate {
  std::vector<std::int64_t> x1;
  std::vector<std::int64_t> x2;
  std::vector<std::int64_t> y;
};

/// Deterministic in (scn.seed, index).
Replicate sample_scenario(const SimScenario& scn, std::uint64_t index);

struct StatResult {
  StatisticId id;
  double proportion = 0.0;
  double std_error = 0.0;
  std::size_t rejections = 0;
  std::size_t fallback_count = 0;
  /// Replicates whose data are impossible under H0 (a cell with zero
  /// hypothesized mass was observed); these count as rejections.
  std::size_t impossible_count = 0;
};

/// One StatResult per scenario statistic. threads = 0 uses the hardware
/// concurrency. Results do not depend on the thread count.
std::vector<StatResult> run(const SimScenario& scn, unsigned threads = 1);

/// Convenience wrapper for a single statistic.
StatResult rejection_proportion(const SimScenario& scn, const StatisticId& id,
                                unsigned threads = 1);

enum class SweepAxis { Rho, M, P };

SweepAxis parse_axis(std::string_view text);
std::string to_string(SweepAxis axis);

struct SweepRow {
  double value = 0.0;
  std::vector<StatResult> results;
};

/// Re-runs the base scenario at every grid point with the same seed. The m
/// axis rescales n1, n2, n3 so that min(n1, n2, n3) equals the grid value
/// while keeping their ratios.
std::vector<SweepRow> sweep(const SimScenario& base, SweepAxis axis,
                            const std::vector<double>& grid, unsigned threads = 1);

/// Long-format CSV: sweep_value,statistic_id,proportion,stderr,fallback_count.
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace convstat

#endif  // CONVSTAT_SIMLAB_HPP_
