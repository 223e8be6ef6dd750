#include "convstat/covest.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "convstat/error.hpp"
#include "convstat/polyrank.hpp"

namespace convstat {

namespace {

std::vector<Pmv> pmvs_of(std::span<const EmpiricalPmv> e) {
  std::vector<Pmv> out;
  out.reserve(e.size());
  for (const auto& v : e) out.push_back(v.pmv);
  return out;
}

std::vector<std::size_t> sizes_of(std::span<const EmpiricalPmv> e) {
  std::vector<std::size_t> out;
  out.reserve(e.size());
  for (const auto& v : e) out.push_back(v.n);
  return out;
}

void require_nondegenerate(std::span<const Pmv> pmvs) {
  for (std::size_t i = 0; i < pmvs.size(); ++i) {
    if (pmvs[i].is_degenerate()) {
      throw Error(ErrorKind::DegenerateVariable,
                  "variable " + std::to_string(i) + " is a point mass");
    }
  }
}

void require_weights(const CovSpec& spec) {
  if (spec.weights.size() != spec.pmvs.size()) {
    throw Error(ErrorKind::DimensionMismatch, "one weight per PMV required");
  }
  for (double c : spec.weights) {
    if (!std::isfinite(c) || c <= 0.0) {
      throw Error(ErrorKind::InvalidCoefficient, "weights must be finite and positive");
    }
  }
}

}  // namespace

std::vector<double> weights_from_sizes(std::span<const std::size_t> sizes) {
  if (sizes.empty()) throw Error(ErrorKind::EmptySizes, "no sample sizes");
  if (std::find(sizes.begin(), sizes.end(), std::size_t{0}) != sizes.end()) {
    throw Error(ErrorKind::EmptySample, "sample size 0");
  }
  const double m = static_cast<double>(*std::min_element(sizes.begin(), sizes.end()));
  std::vector<double> c;
  c.reserve(sizes.size());
  for (std::size_t n : sizes) c.push_back(m / static_cast<double>(n));
  return c;
}

SymMatrix assemble_cov(std::span<const Pmv> pmvs, std::span<const double> weights) {
  if (pmvs.empty()) throw Error(ErrorKind::EmptyProduct, "no PMVs");
  if (weights.size() != pmvs.size()) {
    throw Error(ErrorKind::DimensionMismatch, "one weight per PMV required");
  }
  std::size_t s = 0;
  for (const Pmv& p : pmvs) s += p.max_value();

  SymMatrix out(s + 1);
  if (pmvs.size() == 1) {
    return out += weights[0] * multinomial_cov(pmvs[0]);
  }
  // Prefix/suffix products give every leave-one-out convolution in O(k) folds.
  const std::size_t k = pmvs.size();
  std::vector<std::vector<double>> prefix(k + 1), suffix(k + 1);
  prefix[0] = {1.0};
  suffix[k] = {1.0};
  for (std::size_t i = 0; i < k; ++i) prefix[i + 1] = convolve(prefix[i], pmvs[i].probs());
  for (std::size_t i = k; i-- > 0;) suffix[i] = convolve(pmvs[i].probs(), suffix[i + 1]);

  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(out.mat().rows(), out.mat().cols());
  for (std::size_t i = 0; i < k; ++i) {
    if (pmvs[i].is_degenerate()) continue;
    const std::vector<double> loo = convolve(prefix[i], suffix[i + 1]);
    const Eigen::MatrixXd t = conv_matrix(loo, pmvs[i].size());
    acc += weights[i] * (t * multinomial_cov(pmvs[i]).mat() * t.transpose());
  }
  return SymMatrix(std::move(acc));
}

SymMatrix psi(const CovSpec& spec) {
  if (spec.pmvs.size() < 2) {
    throw Error(ErrorKind::NeedTwoVariables, "Psi needs k >= 2");
  }
  require_weights(spec);
  require_nondegenerate(spec.pmvs);
  return assemble_cov(spec.pmvs, spec.weights);
}

SymMatrix xi(const CovSpec& spec) {
  if (spec.pmvs.empty()) throw Error(ErrorKind::EmptyProduct, "Xi needs h >= 1");
  require_weights(spec);
  require_nondegenerate(spec.pmvs);
  return assemble_cov(spec.pmvs, spec.weights);
}

SymMatrix psi_hat(std::span<const EmpiricalPmv> x) {
  const auto sizes = sizes_of(x);
  return psi_hat(x, weights_from_sizes(sizes));
}

SymMatrix psi_hat(std::span<const EmpiricalPmv> x, std::span<const double> weights) {
  if (x.size() < 2) throw Error(ErrorKind::NeedTwoVariables, "Psi needs k >= 2");
  return assemble_cov(pmvs_of(x), weights);
}

SymMatrix xi_hat(std::span<const EmpiricalPmv> y) {
  const auto sizes = sizes_of(y);
  return xi_hat(y, weights_from_sizes(sizes));
}

SymMatrix xi_hat(std::span<const EmpiricalPmv> y, std::span<const double> weights) {
  if (y.empty()) throw Error(ErrorKind::EmptyProduct, "Xi needs h >= 1");
  return assemble_cov(pmvs_of(y), weights);
}

SymMatrix upsilon(std::span<const Pmv> x) {
  const std::vector<double> ones(x.size(), 1.0);
  CovSpec spec{{x.begin(), x.end()}, ones, Side::SubInd};
  return multinomial_cov(convolve_all(x)) - psi(spec);
}

SymMatrix upsilon_hat(std::span<const std::vector<std::int64_t>> columns,
                      std::span<const std::size_t> supports) {
  if (columns.size() < 2) {
    throw Error(ErrorKind::NeedTwoVariables, "sub-independence needs k >= 2");
  }
  if (!supports.empty() && supports.size() != columns.size()) {
    throw Error(ErrorKind::DimensionMismatch, "one support per column required");
  }
  const std::size_t m = columns[0].size();
  for (const auto& col : columns) {
    if (col.size() != m) throw Error(ErrorKind::NotPaired, "columns differ in length");
  }
  if (m < 2) throw Error(ErrorKind::NotPaired, "need at least two paired rows");

  std::vector<EmpiricalPmv> marg;
  std::vector<std::int64_t> sums(m, 0);
  std::size_t s = 0;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    const auto& col = columns[i];
    const std::int64_t top = *std::max_element(col.begin(), col.end());
    const std::size_t r = supports.empty() ? static_cast<std::size_t>(std::max<std::int64_t>(top, 0))
                                           : supports[i];
    marg.push_back(empirical_pmv(col, r));
    s += r;
    for (std::size_t j = 0; j < m; ++j) sums[j] += col[j];
  }
  const std::vector<double> ones(columns.size(), 1.0);
  return multinomial_cov(empirical_pmv(sums, s).pmv) - psi_hat(marg, ones);
}

}  // namespace convstat
