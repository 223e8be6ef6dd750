#include "convstat/pmv.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "convstat/error.hpp"
#include "convstat/symlin.hpp"

namespace convstat {

namespace {

constexpr double kSumTolerance = 1e-12;
constexpr double kAcceptTolerance = 1e-9;

}  // namespace

Pmv::Pmv(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) {
    throw Error(ErrorKind::InvalidPmv, "empty probability vector");
  }
  for (std::size_t u = 0; u < probs_.size(); ++u) {
    if (!std::isfinite(probs_[u]) || probs_[u] < 0.0) {
      throw Error(ErrorKind::InvalidPmv,
                  "entry " + std::to_string(u) + " is negative or not finite");
    }
  }
  const double sum = std::accumulate(probs_.begin(), probs_.end(), 0.0);
  if (std::abs(sum - 1.0) > kAcceptTolerance) {
    throw Error(ErrorKind::InvalidPmv,
                "entries sum to " + std::to_string(sum) + ", not 1");
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    for (double& p : probs_) p /= sum;
  }
}

Pmv Pmv::point_mass(std::size_t r, std::size_t at) {
  if (at > r) {
    throw Error(ErrorKind::SupportViolation, "point mass outside {0..r}");
  }
  std::vector<double> p(r + 1, 0.0);
  p[at] = 1.0;
  return Pmv(std::move(p));
}

bool Pmv::is_degenerate() const noexcept {
  return std::count_if(probs_.begin(), probs_.end(),
                       [](double p) { return p > 0.0; }) == 1;
}

bool Pmv::is_interior() const noexcept {
  return std::all_of(probs_.begin(), probs_.end(),
                     [](double p) { return p > 0.0; });
}

std::vector<std::size_t> Pmv::zero_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t u = 0; u < probs_.size(); ++u) {
    if (probs_[u] == 0.0) out.push_back(u);
  }
  return out;
}

EmpiricalPmv empirical_pmv(std::span<const std::int64_t> samples,
                           std::size_t r) {
  if (samples.empty()) {
    throw Error(ErrorKind::EmptySample, "no observations");
  }
  std::vector<std::size_t> counts(r + 1, 0);
  for (std::int64_t v : samples) {
    if (v < 0 || static_cast<std::uint64_t>(v) > r) {
      throw Error(ErrorKind::SupportViolation,
                  "observation " + std::to_string(v) + " outside {0.." +
                      std::to_string(r) + "}");
    }
    ++counts[static_cast<std::size_t>(v)];
  }
  const double n = static_cast<double>(samples.size());
  std::vector<double> probs(r + 1);
  std::transform(counts.begin(), counts.end(), probs.begin(),
                 [n](std::size_t c) { return static_cast<double>(c) / n; });
  return {Pmv(std::move(probs)), samples.size()};
}

std::vector<double> convolve(std::span<const double> a,
                             std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] == 0.0) continue;
    for (std::size_t l = 0; l < b.size(); ++l) {
      out[j + l] += a[j] * b[l];
    }
  }
  return out;
}

Pmv convolve(const Pmv& a, const Pmv& b) {
  return Pmv(convolve(a.probs(), b.probs()));
}

Pmv convolve_all(std::span<const Pmv> pmvs) {
  if (pmvs.empty()) {
    throw Error(ErrorKind::EmptyProduct, "convolution of zero PMVs");
  }
  Pmv acc = pmvs.front();
  for (std::size_t i = 1; i < pmvs.size(); ++i) {
    acc = convolve(acc, pmvs[i]);
  }
  return acc;
}

Eigen::MatrixXd conv_matrix(std::span<const double> v, std::size_t cols) {
  const auto len = static_cast<Eigen::Index>(v.size());
  const auto c = static_cast<Eigen::Index>(cols);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(len + c - 1, c);
  for (Eigen::Index j = 0; j < c; ++j) {
    for (Eigen::Index i = 0; i < len; ++i) {
      t(i + j, j) = v[static_cast<std::size_t>(i)];
    }
  }
  return t;
}

SymMatrix multinomial_cov(const Pmv& v) {
  const auto d = static_cast<Eigen::Index>(v.size());
  const Eigen::Map<const Eigen::VectorXd> p(v.probs().data(), d);
  Eigen::MatrixXd s = -p * p.transpose();
  s.diagonal() += p;
  return SymMatrix(std::move(s));
}

}  // namespace convstat
