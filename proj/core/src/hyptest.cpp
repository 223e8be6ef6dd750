#include "convstat/hyptest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "convstat/covest.hpp"
#include "convstat/error.hpp"

namespace convstat {

namespace {

constexpr double kLatticeTol = 1e-9;

std::int64_t on_lattice(double value, double zeta, const std::string& what) {
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::LatticeViolation, what + " is not finite");
  }
  const double u = value / zeta;
  const double rounded = std::round(u);
  if (std::abs(u - rounded) > kLatticeTol) {
    throw Error(ErrorKind::LatticeViolation,
                what + " = " + std::to_string(value) + " is not a multiple of " +
                    std::to_string(zeta));
  }
  return static_cast<std::int64_t>(rounded);
}

std::vector<EmpiricalPmv> empirical(std::span<const CanonicalVariable> vars) {
  std::vector<EmpiricalPmv> out;
  out.reserve(vars.size());
  for (const auto& v : vars) out.push_back(empirical_pmv(v.values, v.support_max));
  return out;
}

std::vector<Pmv> pmvs_of(std::span<const EmpiricalPmv> e) {
  std::vector<Pmv> out;
  for (const auto& v : e) out.push_back(v.pmv);
  return out;
}

std::vector<double> conv_of(std::span<const EmpiricalPmv> e) {
  std::vector<double> acc{1.0};
  for (const auto& v : e) acc = convolve(acc, v.pmv.probs());
  return acc;
}

std::size_t support_sum(std::span<const CanonicalVariable> vars) {
  std::size_t s = 0;
  for (const auto& v : vars) s += v.support_max;
  return s;
}

std::size_t min_size(std::span<const CanonicalVariable> vars) {
  std::size_t m = std::numeric_limits<std::size_t>::max();
  for (const auto& v : vars) m = std::min(m, v.values.size());
  return m;
}

bool all_point_masses(std::span<const EmpiricalPmv> e) {
  return std::all_of(e.begin(), e.end(),
                     [](const EmpiricalPmv& v) { return v.pmv.is_degenerate(); });
}

std::vector<double> leave_one_out_raw(std::span<const Pmv> pmvs, std::size_t i) {
  std::vector<double> acc{1.0};
  for (std::size_t j = 0; j < pmvs.size(); ++j) {
    if (j != i) acc = convolve(acc, pmvs[j].probs());
  }
  return acc;
}

struct RankFacts {
  std::optional<std::size_t> analytic;
  std::size_t lower_bound = 0;
};

// Analytic rank and lower bound from the gcd of the leave-one-out
// convolutions of every side. Point masses are allowed here.
RankFacts rank_facts(std::span<const Pmv> x, std::span<const Pmv> y,
                     std::size_t s, double gcd_tol) {
  std::vector<std::vector<double>> blocks;
  std::size_t zeros = 0;
  bool interior = true;
  auto add = [&](std::span<const Pmv> side) {
    for (std::size_t i = 0; i < side.size(); ++i) {
      blocks.push_back(leave_one_out_raw(side, i));
      zeros += side[i].zero_indices().size();
      interior = interior && side[i].is_interior();
    }
  };
  add(x);
  add(y);
  const std::size_t g = common_divisor_degree(blocks, s + 1, gcd_tol);
  const std::size_t base = s - std::min(s, g);
  RankFacts out;
  out.lower_bound = std::max<std::size_t>(1, base - std::min(base, zeros));
  if (interior && base > 0) out.analytic = base;
  return out;
}

// Chooses r for the pseudo-inverse and the dof, recording diagnostics.
std::size_t choose_rank(const RankPolicy& policy, std::size_t s,
                        const RankFacts* facts, TestReport& rep) {
  using Kind = RankPolicy::Kind;
  const std::size_t nr = std::max<std::size_t>(1, rep.numeric_rank);
  switch (policy.kind) {
    case Kind::Fixed:
      if (policy.r == 0 || policy.r > s) {
        throw Error(ErrorKind::RankOutOfRange,
                    "fixed rank " + std::to_string(policy.r) + " outside 1.." +
                        std::to_string(s));
      }
      if (policy.r > rep.numeric_rank) {
        rep.warnings.push_back("fixed rank " + std::to_string(policy.r) +
                               " exceeds the numeric rank " +
                               std::to_string(rep.numeric_rank) +
                               "; near-zero eigenvalues are dropped without reducing dof");
      }
      return policy.r;
    case Kind::Numeric:
      return nr;
    case Kind::Analytic:
      if (facts == nullptr) {
        rep.warnings.push_back("analytic rank unavailable for padded supports; using numeric rank");
        return nr;
      }
      if (facts->analytic) return *facts->analytic;
      rep.warnings.push_back(
          "empirical PMVs have zero cells; analytic rank replaced by the lower bound");
      return facts->lower_bound;
    case Kind::LowerBound:
      if (facts == nullptr) {
        rep.warnings.push_back("lower bound unavailable for padded supports; using numeric rank");
        return nr;
      }
      return facts->lower_bound;
  }
  return nr;
}

double wald(const Eigen::VectorXd& u, const EigenDecomp& eig, std::size_t r,
            double pinv_tol, std::vector<std::string>& warnings) {
  const SymMatrix p = rank_r_pinv(eig, r, pinv_tol);
  const double q = quad_form(u, p);
  if (q < 0.0) {
    if (q < -1e-8 * std::max(1.0, u.squaredNorm())) {
      warnings.push_back("negative quadratic form clamped to 0");
    }
    return 0.0;
  }
  return q;
}

Eigen::VectorXd scaled_diff(const std::vector<double>& a, const std::vector<double>& b,
                            std::size_t len, std::size_t m) {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(len));
  for (std::size_t j = 0; j < a.size(); ++j) u(static_cast<Eigen::Index>(j)) += a[j];
  for (std::size_t j = 0; j < b.size(); ++j) u(static_cast<Eigen::Index>(j)) -= b[j];
  return std::sqrt(static_cast<double>(m)) * u;
}

void finish(TestReport& rep) {
  rep.p_value = chi2_sf(rep.statistic, static_cast<int>(rep.dof));
}

std::vector<std::int64_t> row_sums(std::span<const CanonicalVariable> vars,
                                   std::vector<std::string>& warnings) {
  if (vars.size() == 1) return vars[0].values;
  return paired_sums(vars, &warnings);
}

void require_nonempty(std::span<const CanonicalVariable> vars) {
  for (const auto& v : vars) {
    if (v.values.empty()) throw Error(ErrorKind::EmptySample, "variable '" + v.id + "' has no observations");
  }
}

}  // namespace

CanonicalSamples canonicalize(const SampleSet& raw) {
  if (!(raw.lattice > 0.0) || !std::isfinite(raw.lattice)) {
    throw Error(ErrorKind::DomainError, "lattice unit must be positive");
  }
  CanonicalSamples out;
  out.total_offset = on_lattice(raw.offset, raw.lattice, "offset");
  for (const RawVariable& var : raw.variables) {
    if (var.values.empty()) {
      throw Error(ErrorKind::EmptySample, "variable '" + var.id + "' has no observations");
    }
    if (var.coefficient == 0) {
      throw Error(ErrorKind::InvalidCoefficient, "variable '" + var.id + "' has coefficient 0");
    }
    CanonicalVariable cv;
    cv.id = var.id;
    cv.values.reserve(var.values.size());
    for (double v : var.values) {
      cv.values.push_back(var.coefficient * on_lattice(v, raw.lattice, "value of '" + var.id + "'"));
    }
    cv.shift = *std::min_element(cv.values.begin(), cv.values.end());
    for (auto& v : cv.values) v -= cv.shift;
    const auto top = static_cast<std::size_t>(*std::max_element(cv.values.begin(), cv.values.end()));
    cv.support_max = var.support.value_or(top);
    if (cv.support_max < top) {
      throw Error(ErrorKind::SupportViolation,
                  "variable '" + var.id + "' exceeds its declared support " +
                      std::to_string(cv.support_max));
    }
    out.total_offset += cv.shift;
    out.variables.push_back(std::move(cv));
  }
  return out;
}

RankPolicy RankPolicy::parse(std::string_view text) {
  if (text == "analytic") return analytic();
  if (text == "numeric") return numeric();
  if (text == "lower" || text == "lower_bound") return lower_bound();
  constexpr std::string_view prefix = "fixed:";
  if (text.substr(0, prefix.size()) == prefix) {
    const std::string_view num = text.substr(prefix.size());
    std::size_t r = 0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), r);
    if (ec == std::errc{} && ptr == num.data() + num.size() && !num.empty()) return fixed(r);
  }
  throw Error(ErrorKind::DomainError, "unknown rank policy '" + std::string(text) + "'");
}

std::string RankPolicy::to_string() const {
  switch (kind) {
    case Kind::Analytic: return "analytic";
    case Kind::Numeric: return "numeric";
    case Kind::Fixed: return "fixed:" + std::to_string(r);
    case Kind::LowerBound: return "lower_bound";
  }
  return "analytic";
}

std::vector<std::int64_t> paired_sums(std::span<const CanonicalVariable> vars,
                                      std::vector<std::string>* warnings) {
  if (vars.empty()) throw Error(ErrorKind::EmptySample, "no variables");
  const std::size_t m = min_size(vars);
  if (m == 0) throw Error(ErrorKind::EmptySample, "a variable has no observations");
  std::vector<std::int64_t> sums(m, 0);
  std::size_t dropped = 0;
  for (const auto& v : vars) {
    for (std::size_t j = 0; j < m; ++j) sums[j] += v.values[j];
    dropped += v.values.size() - m;
  }
  if (dropped > 0 && warnings != nullptr) {
    warnings->push_back("Pearson pairing used the first " + std::to_string(m) +
                        " observations of each variable; " + std::to_string(dropped) +
                        " observations discarded");
  }
  return sums;
}

TestReport pearson_gof(std::span<const std::int64_t> sums, const Pmv& z) {
  if (sums.empty()) throw Error(ErrorKind::EmptySample, "no summed observations");
  const std::size_t s = z.max_value();
  std::vector<double> counts(s + 1, 0.0);
  for (std::int64_t v : sums) {
    if (v < 0 || static_cast<std::size_t>(v) > s) {
      throw Error(ErrorKind::SupportViolation,
                  "sum " + std::to_string(v) + " outside {0.." + std::to_string(s) + "}");
    }
    counts[static_cast<std::size_t>(v)] += 1.0;
  }
  TestReport rep;
  rep.test = "pearson_gof";
  rep.m = sums.size();
  rep.s = s;
  const double m = static_cast<double>(sums.size());
  std::size_t cells = 0;
  for (std::size_t j = 0; j <= s; ++j) {
    const double expected = m * z[j];
    if (expected == 0.0) {
      if (counts[j] > 0.0) {
        throw Error(ErrorKind::ZeroExpected,
                    "cell " + std::to_string(j) + " has expected count 0 but observations");
      }
      continue;
    }
    ++cells;
    const double d = counts[j] - expected;
    rep.statistic += d * d / expected;
    if (expected < 1.0) {
      rep.warnings.push_back("expected count " + std::to_string(expected) + " in cell " +
                             std::to_string(j) + " is below 1");
    }
  }
  rep.dof = std::max<std::size_t>(1, cells - 1);
  finish(rep);
  return rep;
}

TestReport pearson_ed(std::span<const std::int64_t> x_sums,
                      std::span<const std::int64_t> y_sums) {
  if (x_sums.empty() || y_sums.empty()) {
    throw Error(ErrorKind::EmptySample, "both samples must be nonempty");
  }
  std::int64_t top = 0;
  for (auto v : x_sums) top = std::max(top, v);
  for (auto v : y_sums) top = std::max(top, v);
  const auto len = static_cast<std::size_t>(top) + 1;
  std::vector<double> o1(len, 0.0), o2(len, 0.0);
  auto tally = [](std::span<const std::int64_t> s, std::vector<double>& o) {
    for (auto v : s) {
      if (v < 0) throw Error(ErrorKind::SupportViolation, "negative sum");
      o[static_cast<std::size_t>(v)] += 1.0;
    }
  };
  tally(x_sums, o1);
  tally(y_sums, o2);

  TestReport rep;
  rep.test = "pearson_ed";
  rep.m = std::min(x_sums.size(), y_sums.size());
  rep.s = len - 1;
  const double n = static_cast<double>(x_sums.size());
  const double mm = static_cast<double>(y_sums.size());
  std::size_t cells = 0;
  std::size_t merged = 0;
  for (std::size_t j = 0; j < len; ++j) {
    const double pooled = o1[j] + o2[j];
    if (pooled == 0.0) {
      ++merged;
      continue;
    }
    ++cells;
    const double d = mm * o1[j] - n * o2[j];
    rep.statistic += d * d / (n * mm * pooled);
  }
  if (merged > 0) {
    rep.warnings.push_back(std::to_string(merged) +
                           " empty pooled cell(s) merged into their neighbours");
  }
  rep.dof = std::max<std::size_t>(1, cells - 1);
  finish(rep);
  return rep;
}

TestReport gof_test(std::span<const CanonicalVariable> x, const Pmv& z,
                    RankPolicy policy, const TestOptions& opts) {
  if (x.size() < 2) {
    throw Error(ErrorKind::NeedTwoVariables, "goodness of fit needs k >= 2 variables");
  }
  require_nonempty(x);
  const std::size_t s = support_sum(x);
  if (z.max_value() != s) {
    throw Error(ErrorKind::SupportMismatch,
                "z has support {0.." + std::to_string(z.max_value()) + "} but the sum has {0.." +
                    std::to_string(s) + "}");
  }

  TestReport rep;
  rep.test = "gof";
  rep.policy = policy;
  rep.s = s;
  rep.m = min_size(x);

  const auto emp = empirical(x);
  const std::vector<double> xhat = conv_of(emp);
  for (std::size_t j = 0; j <= s; ++j) {
    if (z[j] == 0.0 && xhat[j] > 0.0) {
      throw Error(ErrorKind::ZeroExpected,
                  "z puts no mass on " + std::to_string(j) + " but the data do");
    }
  }

  if (all_point_masses(emp)) {
    rep.fallback_used = true;
    rep.warnings.push_back("every empirical PMV is a point mass; Pearson statistic used");
    const auto sums = paired_sums(x, &rep.warnings);
    const TestReport p = pearson_gof(sums, z);
    rep.statistic = p.statistic;
    rep.dof = policy.kind == RankPolicy::Kind::Fixed && policy.r >= 1 ? policy.r : p.dof;
    rep.warnings.insert(rep.warnings.end(), p.warnings.begin(), p.warnings.end());
    finish(rep);
    return rep;
  }

  const SymMatrix cov = psi_hat(emp);
  const EigenDecomp eig = eigh(cov);
  rep.eigenvalues.assign(eig.values.data(), eig.values.data() + eig.values.size());
  rep.numeric_rank = numeric_rank(eig, opts.rank_tol);
  const auto pm = pmvs_of(emp);
  const RankFacts facts = rank_facts(pm, {}, s, opts.gcd_tol);
  rep.analytic_rank = facts.analytic;
  rep.lower_bound = facts.lower_bound;

  const std::size_t r = choose_rank(policy, s, &facts, rep);
  rep.dof = r;
  rep.statistic = wald(scaled_diff(xhat, z.vector(), s + 1, rep.m), eig, r,
                       opts.pinv_tol, rep.warnings);
  finish(rep);
  return rep;
}

TestReport gof_test(const CanonicalSamples& x, const Pmv& z, RankPolicy policy,
                    const TestOptions& opts) {
  TestReport rep = gof_test(x.variables, z, policy, opts);
  rep.x_offset = x.total_offset;
  return rep;
}

TestReport ed_test(std::span<const CanonicalVariable> x,
                   std::span<const CanonicalVariable> y, RankPolicy policy,
                   const TestOptions& opts) {
  if (x.empty() || y.empty() || x.size() + y.size() < 2) {
    throw Error(ErrorKind::NeedTwoVariables, "each side needs at least one variable");
  }
  require_nonempty(x);
  require_nonempty(y);
  const std::size_t sx = support_sum(x);
  const std::size_t sy = support_sum(y);
  const std::size_t s = std::max(sx, sy);

  TestReport rep;
  rep.test = "ed";
  rep.policy = policy;
  rep.s = s;
  rep.padded = sx != sy;
  if (rep.padded) {
    rep.warnings.push_back("supports differ (" + std::to_string(sx) + " vs " +
                           std::to_string(sy) +
                           "); the shorter side is zero-padded, which extends the method");
  }

  std::vector<std::size_t> sizes;
  for (const auto& v : x) sizes.push_back(v.values.size());
  for (const auto& v : y) sizes.push_back(v.values.size());
  rep.m = *std::min_element(sizes.begin(), sizes.end());
  const auto w = weights_from_sizes(sizes);

  const auto ex = empirical(x);
  const auto ey = empirical(y);

  if (all_point_masses(ex) && all_point_masses(ey)) {
    rep.fallback_used = true;
    rep.warnings.push_back("every empirical PMV is a point mass; Pearson statistic used");
    const auto xs = row_sums(x, rep.warnings);
    const auto ys = row_sums(y, rep.warnings);
    const TestReport p = pearson_ed(xs, ys);
    rep.statistic = p.statistic;
    rep.dof = policy.kind == RankPolicy::Kind::Fixed && policy.r >= 1 ? policy.r : p.dof;
    rep.warnings.insert(rep.warnings.end(), p.warnings.begin(), p.warnings.end());
    finish(rep);
    return rep;
  }

  const auto px = pmvs_of(ex);
  const auto py = pmvs_of(ey);
  const std::span<const double> wx(w.data(), x.size());
  const std::span<const double> wy(w.data() + x.size(), y.size());
  SymMatrix cov = assemble_cov(px, wx).padded(s + 1);
  cov += assemble_cov(py, wy).padded(s + 1);

  const EigenDecomp eig = eigh(cov);
  rep.eigenvalues.assign(eig.values.data(), eig.values.data() + eig.values.size());
  rep.numeric_rank = numeric_rank(eig, opts.rank_tol);

  std::optional<RankFacts> facts;
  if (!rep.padded) {
    facts = rank_facts(px, py, s, opts.gcd_tol);
    rep.analytic_rank = facts->analytic;
    rep.lower_bound = facts->lower_bound;
  }
  const std::size_t r = choose_rank(policy, s, facts ? &*facts : nullptr, rep);
  rep.dof = r;
  rep.statistic = wald(scaled_diff(conv_of(ex), conv_of(ey), s + 1, rep.m), eig, r,
                       opts.pinv_tol, rep.warnings);
  finish(rep);
  return rep;
}

TestReport ed_test(const CanonicalSamples& x, const CanonicalSamples& y,
                   RankPolicy policy, const TestOptions& opts) {
  if (x.total_offset != y.total_offset) {
    TestReport rep;
    rep.test = "ed";
    rep.policy = policy;
    rep.deterministic_rejection = true;
    rep.statistic = std::numeric_limits<double>::infinity();
    rep.p_value = 0.0;
    rep.s = std::max(support_sum(x.variables), support_sum(y.variables));
    rep.dof = std::max<std::size_t>(1, rep.s);
    rep.x_offset = x.total_offset;
    rep.y_offset = y.total_offset;
    rep.warnings.push_back("offsets differ (" + std::to_string(x.total_offset) + " vs " +
                           std::to_string(y.total_offset) +
                           "): the sums cannot share a distribution");
    rep.warnings.push_back("offsets are estimated from observed minima and can be biased "
                           "upward in small samples");
    return rep;
  }
  TestReport rep = ed_test(x.variables, y.variables, policy, opts);
  rep.x_offset = x.total_offset;
  rep.y_offset = y.total_offset;
  return rep;
}

TestReport subind_test(std::span<const std::vector<std::int64_t>> columns,
                       std::span<const std::size_t> supports, const TestOptions& opts) {
  if (columns.size() < 2) {
    throw Error(ErrorKind::NeedTwoVariables, "sub-independence needs k >= 2 columns");
  }
  const std::size_t m = columns[0].size();
  for (const auto& c : columns) {
    if (c.size() != m) throw Error(ErrorKind::NotPaired, "columns differ in length");
  }
  if (m < 2) throw Error(ErrorKind::NotPaired, "need at least two paired rows");

  std::vector<std::size_t> r(columns.size());
  for (std::size_t i = 0; i < columns.size(); ++i) {
    const auto top = *std::max_element(columns[i].begin(), columns[i].end());
    r[i] = supports.empty() ? static_cast<std::size_t>(std::max<std::int64_t>(0, top))
                            : supports[i];
  }

  TestReport rep;
  rep.test = "subind";
  rep.policy = RankPolicy::fixed(std::accumulate(r.begin(), r.end(), std::size_t{0}));
  rep.s = rep.policy.r;
  rep.m = m;
  if (rep.s == 0) {
    rep.fallback_used = true;
    rep.dof = 1;
    rep.warnings.push_back("every column is constant; the statistic is degenerate");
    finish(rep);
    return rep;
  }

  std::vector<EmpiricalPmv> marg;
  std::vector<std::int64_t> sums(m, 0);
  for (std::size_t i = 0; i < columns.size(); ++i) {
    marg.push_back(empirical_pmv(columns[i], r[i]));
    for (std::size_t j = 0; j < m; ++j) sums[j] += columns[i][j];
  }
  const Pmv zhat = empirical_pmv(sums, rep.s).pmv;
  const SymMatrix ups = upsilon_hat(columns, r);
  rep.dof = rep.s;

  if (ups.is_zero()) {
    rep.fallback_used = true;
    rep.warnings.push_back("estimated covariance is the zero matrix; the statistic is degenerate");
    finish(rep);
    return rep;
  }

  const EigenDecomp eig = eigh(ups);
  rep.eigenvalues.assign(eig.values.data(), eig.values.data() + eig.values.size());
  rep.numeric_rank = numeric_rank(eig, opts.rank_tol);
  if (rep.numeric_rank < rep.s) {
    rep.warnings.push_back("estimated covariance has numeric rank " +
                           std::to_string(rep.numeric_rank) + " below s = " +
                           std::to_string(rep.s));
  }
  rep.statistic = wald(scaled_diff(conv_of(marg), zhat.vector(), rep.s + 1, m), eig, rep.s,
                       opts.pinv_tol, rep.warnings);
  finish(rep);
  return rep;
}

OracleEngine::OracleEngine(const OracleModel& model, std::size_t r, const TestOptions& opts)
    : model_(model), z_(model.z ? *model.z : convolve_all(model.x)) {
  if (model_.x.size() < 2) throw Error(ErrorKind::NeedTwoVariables, "oracle needs k >= 2");
  s_ = z_.max_value();
  if (convolve_all(model_.x).max_value() != s_) {
    throw Error(ErrorKind::SupportMismatch, "hypothesized z does not match the x supports");
  }
  auto sizes_or_ones = [](const std::vector<std::size_t>& sizes, std::size_t n) {
    return sizes.empty() ? std::vector<std::size_t>(n, 1) : sizes;
  };
  const auto xs = sizes_or_ones(model_.x_sizes, model_.x.size());
  if (xs.size() != model_.x.size()) {
    throw Error(ErrorKind::DimensionMismatch, "one x size per PMV required");
  }

  auto prepare = [&](const SymMatrix& cov, std::size_t& rank_out, SymMatrix& pinv_out,
                     std::vector<double>& eig_out) {
    const EigenDecomp eig = eigh(cov);
    eig_out.assign(eig.values.data(), eig.values.data() + eig.values.size());
    rank_out = r == 0 ? std::max<std::size_t>(1, numeric_rank(eig, opts.rank_tol)) : r;
    if (rank_out > s_) {
      throw Error(ErrorKind::RankOutOfRange, "oracle rank exceeds s");
    }
    pinv_out = rank_r_pinv(eig, rank_out, opts.pinv_tol);
  };

  prepare(psi({model_.x, weights_from_sizes(xs), Side::GF}), r_gf_, pinv_gf_, eig_gf_);

  if (!model_.y.empty()) {
    const Pmv zy = convolve_all(model_.y);
    if (zy.max_value() != s_) {
      throw Error(ErrorKind::DimensionMismatch, "oracle sides have different supports");
    }
    const auto ys = sizes_or_ones(model_.y_sizes, model_.y.size());
    if (ys.size() != model_.y.size()) {
      throw Error(ErrorKind::DimensionMismatch, "one y size per PMV required");
    }
    std::vector<std::size_t> all(xs);
    all.insert(all.end(), ys.begin(), ys.end());
    const auto w = weights_from_sizes(all);
    const std::vector<double> wx(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(xs.size()));
    const std::vector<double> wy(w.begin() + static_cast<std::ptrdiff_t>(xs.size()), w.end());
    const SymMatrix cov = psi({model_.x, wx, Side::GF}) + xi({model_.y, wy, Side::ED});
    prepare(cov, r_ed_, pinv_ed_, eig_ed_);
  }
}

TestReport OracleEngine::gf(std::span<const CanonicalVariable> x) const {
  if (x.size() != model_.x.size() || support_sum(x) != s_) {
    throw Error(ErrorKind::SupportMismatch, "data do not match the oracle model");
  }
  require_nonempty(x);
  TestReport rep;
  rep.test = "oracle_gof";
  rep.policy = RankPolicy::fixed(r_gf_);
  rep.s = s_;
  rep.m = min_size(x);
  rep.dof = r_gf_;
  rep.eigenvalues = eig_gf_;
  const Eigen::VectorXd u = scaled_diff(conv_of(empirical(x)), z_.vector(), s_ + 1, rep.m);
  rep.statistic = std::max(0.0, quad_form(u, pinv_gf_));
  finish(rep);
  return rep;
}

TestReport OracleEngine::ed(std::span<const CanonicalVariable> x,
                            std::span<const CanonicalVariable> y) const {
  if (!has_ed()) throw Error(ErrorKind::NeedTwoVariables, "oracle model has no y side");
  if (support_sum(x) != s_ || support_sum(y) != s_) {
    throw Error(ErrorKind::SupportMismatch, "data do not match the oracle model");
  }
  require_nonempty(x);
  require_nonempty(y);
  TestReport rep;
  rep.test = "oracle_ed";
  rep.policy = RankPolicy::fixed(r_ed_);
  rep.s = s_;
  rep.m = std::min(min_size(x), min_size(y));
  rep.dof = r_ed_;
  rep.eigenvalues = eig_ed_;
  const Eigen::VectorXd u =
      scaled_diff(conv_of(empirical(x)), conv_of(empirical(y)), s_ + 1, rep.m);
  rep.statistic = std::max(0.0, quad_form(u, pinv_ed_));
  finish(rep);
  return rep;
}

OracleReports oracle_statistics(const OracleModel& model,
                                std::span<const CanonicalVariable> x,
                                std::span<const CanonicalVariable> y, std::size_t r,
                                const TestOptions& opts) {
  const OracleEngine engine(model, r, opts);
  OracleReports out{engine.gf(x), std::nullopt};
  if (engine.has_ed() && !y.empty()) out.ed = engine.ed(x, y);
  return out;
}

}  // namespace convstat
