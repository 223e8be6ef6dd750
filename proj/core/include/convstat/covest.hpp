#ifndef CONVSTAT_COVEST_HPP_
#define CONVSTAT_COVEST_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "convstat/pmv.hpp"
#include "convstat/symlin.hpp"

namespace convstat {

/// c_i = min(n) / n_i.
std::vector<double> weights_from_sizes(std::span<const std::size_t> sizes);

enum class Side { GF, ED, SubInd };

struct CovSpec {
  std::vector<Pmv> pmvs;
  std::vector<double> weights;
  Side side = Side::GF;
};

/// sum_i c_i T(x_(i)) Sigma(x_i) T(x_(i))' with no validity checks beyond
/// matching lengths. A single PMV yields c_1 Sigma(x_1).
SymMatrix assemble_cov(std::span<const Pmv> pmvs, std::span<const double> weights);

/// Psi for true PMVs. Needs k >= 2 and no point mass.
SymMatrix psi(const CovSpec& spec);
/// Xi for true PMVs. Needs h >= 1 and no point mass.
SymMatrix xi(const CovSpec& spec);

/// Plug-in estimators. Point masses are allowed and contribute nothing, so
/// the result is the zero matrix when every variable is constant.
SymMatrix psi_hat(std::span<const EmpiricalPmv> x);
SymMatrix psi_hat(std::span<const EmpiricalPmv> x, std::span<const double> weights);
SymMatrix xi_hat(std::span<const EmpiricalPmv> y);
SymMatrix xi_hat(std::span<const EmpiricalPmv> y, std::span<const double> weights);

/// Sigma(z) - Psi with unit weights, for independent true PMVs.
SymMatrix upsilon(std::span<const Pmv> x);

/// Sigma(z_hat) - Psi_hat from paired rows; columns[i][j] is the j-th
/// observation of variable i. Supports come from the column maxima unless
/// given explicitly.
SymMatrix upsilon_hat(std::span<const std::vector<std::int64_t>> columns,
                      std::span<const std::size_t> supports = {});

}  // namespace convstat

#endif  // CONVSTAT_COVEST_HPP_
