#include "convstat/simlab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <optional>
#include <ostream>
#include <thread>

#include "convstat/error.hpp"
#include "convstat/hyptest.hpp"
#include "convstat/rng.hpp"

namespace convstat {

namespace {

enum Outcome : std::uint8_t {
  kRejected = 1,
  kFallback = 2,
  kImpossible = 4,
};

std::vector<std::int64_t> bernoulli(StreamRng rng, std::size_t n, double p) {
  std::vector<std::int64_t> out(n);
  for (auto& v : out) v = rng.uniform() < p ? 1 : 0;
  return out;
}

// Everything a replicate needs that does not depend on the data.
struct Context {
  const SimScenario& scn;
  Pmv z;
  Pmv x1;
  Pmv x2;
  std::optional<OracleEngine> oracle[3];

  explicit Context(const SimScenario& s)
      : scn(s), z(z_rho(s.p, s.q, s.rho)), x1({1.0 - s.p, s.p}), x2({1.0 - s.q, s.q}) {
    for (const auto& id : s.statistics) {
      if (id.family != StatisticId::Family::Z || oracle[id.r]) continue;
      OracleModel model{{x1, x2}, {z}, z, {s.n1, s.n2}, {s.n3}};
      oracle[id.r].emplace(model, id.r);
    }
  }

  std::uint8_t evaluate(const StatisticId& id, const std::vector<CanonicalVariable>& xs,
                        const std::vector<CanonicalVariable>& ys) const {
    using F = StatisticId::Family;
    const bool gf = id.test == StatisticId::Test::GF;
    try {
      TestReport rep;
      switch (id.family) {
        case F::C:
          rep = gf ? gof_test(xs, z, RankPolicy::fixed(id.r))
                   : ed_test(std::span<const CanonicalVariable>(xs),
                             std::span<const CanonicalVariable>(ys), RankPolicy::fixed(id.r));
          break;
        case F::Z:
          rep = gf ? oracle[id.r]->gf(xs) : oracle[id.r]->ed(xs, ys);
          break;
        case F::P: {
          const auto sums = paired_sums(xs);
          rep = gf ? pearson_gof(sums, z) : pearson_ed(sums, ys[0].values);
          break;
        }
      }
      std::uint8_t out = rep.p_value < scn.alpha ? kRejected : 0;
      if (rep.fallback_used) out |= kFallback;
      return out;
    } catch (const Error& e) {
      // Data on a cell with zero hypothesized mass cannot arise under H0.
      if (e.kind() == ErrorKind::ZeroExpected) return kRejected | kImpossible;
      throw;
    }
  }
};

void check_unit(double v, const char* name, bool closed) {
  const bool ok = closed ? (v >= 0.0 && v <= 1.0) : (v > 0.0 && v < 1.0);
  if (!ok || !std::isfinite(v)) {
    throw Error(ErrorKind::InvalidScenario, std::string(name) + " out of range");
  }
}

}  // namespace

Pmv z_rho(double p, double q, double rho, bool require_interior) {
  check_unit(p, "p", false);
  check_unit(q, "q", false);
  check_unit(rho, "rho", true);
  const double a = p * q + std::sqrt(p * q * (1.0 - p) * (1.0 - q));
  const Pmv conv = convolve(Pmv({1.0 - p, p}), Pmv({1.0 - q, q}));
  if (rho == 0.0) return conv;
  const auto& c = conv.vector();
  Pmv z({(1.0 - rho) * c[0] + rho * (1.0 - a), (1.0 - rho) * c[1], (1.0 - rho) * c[2] + rho * a});
  if (require_interior && !z.is_interior()) {
    throw Error(ErrorKind::ModelDegenerate, "z(rho) has a zero cell");
  }
  return z;
}

StatisticId StatisticId::parse(std::string_view text) {
  StatisticId id;
  const auto bad = [&] {
    return Error(ErrorKind::InvalidScenario, "unknown statistic '" + std::string(text) + "'");
  };
  const auto us = text.find('_');
  if (us == std::string_view::npos) throw bad();
  const std::string_view head = text.substr(0, us);
  const std::string_view tail = text.substr(us + 1);
  if (tail == "GF") {
    id.test = Test::GF;
  } else if (tail == "ED") {
    id.test = Test::ED;
  } else {
    throw bad();
  }
  if (head == "P") {
    id.family = Family::P;
    id.r = 0;
    return id;
  }
  if (head.size() != 2 || (head[1] != '1' && head[1] != '2')) throw bad();
  if (head[0] == 'C') {
    id.family = Family::C;
  } else if (head[0] == 'Z') {
    id.family = Family::Z;
  } else {
    throw bad();
  }
  id.r = static_cast<std::size_t>(head[1] - '0');
  return id;
}

std::string StatisticId::to_string() const {
  std::string out;
  switch (family) {
    case Family::C: out = "C" + std::to_string(r); break;
    case Family::Z: out = "Z" + std::to_string(r); break;
    case Family::P: out = "P"; break;
  }
  return out + (test == Test::GF ? "_GF" : "_ED");
}

void SimScenario::validate() const {
  check_unit(p, "p", false);
  check_unit(q, "q", false);
  check_unit(rho, "rho", true);
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw Error(ErrorKind::InvalidScenario, "alpha out of range");
  }
  if (n1 == 0 || n2 == 0 || n3 == 0) {
    throw Error(ErrorKind::InvalidScenario, "sample sizes must be positive");
  }
  if (L == 0) throw Error(ErrorKind::InvalidScenario, "L must be positive");
  if (statistics.empty()) throw Error(ErrorKind::InvalidScenario, "no statistics requested");
}

Replicate sample_scenario(const SimScenario& scn, std::uint64_t index) {
  const Pmv z = z_rho(scn.p, scn.q, scn.rho);
  Replicate rep;
  rep.x1 = bernoulli(StreamRng(scn.seed, index, 0), scn.n1, scn.p);
  rep.x2 = bernoulli(StreamRng(scn.seed, index, 1), scn.n2, scn.q);
  StreamRng rng(scn.seed, index, 2);
  rep.y.resize(scn.n3);
  const double c0 = z[0];
  const double c1 = z[0] + z[1];
  for (auto& v : rep.y) {
    const double u = rng.uniform();
    v = u < c0 ? 0 : (u < c1 ? 1 : 2);
  }
  return rep;
}

std::vector<StatResult> run(const SimScenario& scn, unsigned threads) {
  scn.validate();
  const Context ctx(scn);
  const std::size_t nstat = scn.statistics.size();
  std::vector<std::uint8_t> outcome(scn.L * nstat, 0);

  auto work = [&](std::size_t l) {
    Replicate rep = sample_scenario(scn, l);
    const std::vector<CanonicalVariable> xs{{"X1", std::move(rep.x1), 1, 0},
                                            {"X2", std::move(rep.x2), 1, 0}};
    const std::vector<CanonicalVariable> ys{{"Y1", std::move(rep.y), 2, 0}};
    for (std::size_t k = 0; k < nstat; ++k) {
      outcome[l * nstat + k] = ctx.evaluate(scn.statistics[k], xs, ys);
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  if (threads == 1) {
    for (std::size_t l = 0; l < scn.L; ++l) work(l);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        try {
          for (std::size_t l = next++; l < scn.L; l = next++) work(l);
        } catch (...) {
          const std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = scn.L;
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<StatResult> results(nstat);
  for (std::size_t k = 0; k < nstat; ++k) {
    StatResult& res = results[k];
    res.id = scn.statistics[k];
    for (std::size_t l = 0; l < scn.L; ++l) {
      const std::uint8_t o = outcome[l * nstat + k];
      res.rejections += (o & kRejected) ? 1 : 0;
      res.fallback_count += (o & kFallback) ? 1 : 0;
      res.impossible_count += (o & kImpossible) ? 1 : 0;
    }
    const double L = static_cast<double>(scn.L);
    res.proportion = static_cast<double>(res.rejections) / L;
    res.std_error = std::sqrt(res.proportion * (1.0 - res.proportion) / L);
  }
  return results;
}

StatResult rejection_proportion(const SimScenario& scn, const StatisticId& id,
                                unsigned threads) {
  SimScenario one = scn;
  one.statistics = {id};
  return run(one, threads).front();
}

SweepAxis parse_axis(std::string_view text) {
  if (text == "rho") return SweepAxis::Rho;
  if (text == "m") return SweepAxis::M;
  if (text == "p") return SweepAxis::P;
  throw Error(ErrorKind::InvalidScenario, "unknown sweep axis '" + std::string(text) + "'");
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Rho: return "rho";
    case SweepAxis::M: return "m";
    case SweepAxis::P: return "p";
  }
  return "rho";
}

std::vector<SweepRow> sweep(const SimScenario& base, SweepAxis axis,
                            const std::vector<double>& grid, unsigned threads) {
  if (grid.empty()) throw Error(ErrorKind::InvalidScenario, "empty sweep grid");
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  const double m0 = static_cast<double>(std::min({base.n1, base.n2, base.n3}));
  for (double v : grid) {
    SimScenario scn = base;
    switch (axis) {
      case SweepAxis::Rho: scn.rho = v; break;
      case SweepAxis::P: scn.p = v; break;
      case SweepAxis::M: {
        if (!(v >= 1.0)) throw Error(ErrorKind::InvalidScenario, "m grid values must be >= 1");
        auto scale = [&](std::size_t n) {
          return static_cast<std::size_t>(std::max(1.0, std::round(static_cast<double>(n) * v / m0)));
        };
        scn.n1 = scale(base.n1);
        scn.n2 = scale(base.n2);
        scn.n3 = scale(base.n3);
        break;
      }
    }
    rows.push_back({v, run(scn, threads)});
  }
  return rows;
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "sweep_value,statistic_id,proportion,stderr,fallback_count\n";
  char buf[160];
  for (const auto& row : rows) {
    for (const auto& r : row.results) {
      std::snprintf(buf, sizeof buf, "%.10g,%s,%.10g,%.10g,%zu\n", row.value,
                    r.id.to_string().c_str(), r.proportion, r.std_error, r.fallback_count);
      out << buf;
    }
  }
}

}  // namespace convstat
