#include <algorithm>
#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "convstat/rng.hpp"
#include "convstat/simlab.hpp"
#include "support/expect.hpp"

using namespace convstat;
using testutil::expect_near_vec;
using testutil::kind_of;

namespace {

SimScenario small(std::vector<std::string> ids, std::size_t L = 200) {
  SimScenario s;
  s.n1 = s.n2 = s.n3 = 50;
  s.L = L;
  for (const auto& id : ids) s.statistics.push_back(StatisticId::parse(id));
  return s;
}

std::vector<double> tally3(const std::vector<std::int64_t>& ys) {
  std::vector<double> out(3, 0.0);
  for (auto v : ys) out[static_cast<std::size_t>(v)] += 1.0;
  for (auto& v : out) v /= static_cast<double>(ys.size());
  return out;
}

}  // namespace

TEST(StreamRng, DeterministicAndKeyed) {
  StreamRng a(1, 2, 3), b(1, 2, 3), c(1, 2, 4), d(1, 3, 3);
  for (int i = 0; i < 10; ++i) {
    const auto va = a.next_u64();
    EXPECT_EQ(va, b.next_u64());
    EXPECT_NE(va, c.next_u64());
    EXPECT_NE(va, d.next_u64());
  }
  StreamRng u(9, 0, 0);
  double mean = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double x = u.uniform();
    ASSERT_GE(x, 0.0);
    ASSERT_LT(x, 1.0);
    mean += x;
  }
  EXPECT_NEAR(mean / 100000, 0.5, 0.005);
}

TEST(ZRho, Examples) {
  const Pmv conv = convolve(Pmv({1.0 - 0.3, 0.3}), Pmv({1.0 - 0.8, 0.8}));
  EXPECT_EQ(z_rho(0.3, 0.8, 0.0).vector(), conv.vector());
  expect_near_vec(z_rho(0.3, 0.8, 1.0).vector(), {0.576697, 0.0, 0.423303}, 1e-6);
  expect_near_vec(z_rho(0.3, 0.8, 0.5).vector(), {0.358349, 0.31, 0.331651}, 1e-6);
  EXPECT_EQ(kind_of([] { z_rho(0.3, 0.8, 1.0, true); }), ErrorKind::ModelDegenerate);
  EXPECT_NO_THROW(z_rho(0.3, 0.8, 0.99, true));
  EXPECT_EQ(kind_of([] { z_rho(0.0, 0.8, 0.5); }), ErrorKind::InvalidScenario);
  EXPECT_EQ(kind_of([] { z_rho(0.3, 0.8, 1.5); }), ErrorKind::InvalidScenario);
}

TEST(ZRho, SumsToOneWithExactMiddleCell) {
  for (double p : {0.1, 0.3, 0.5, 0.8}) {
    for (double q : {0.2, 0.5, 0.9}) {
      for (double rho : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const Pmv z = z_rho(p, q, rho);
        EXPECT_NEAR(z[0] + z[1] + z[2], 1.0, 1e-15);
        EXPECT_EQ(z[1], (1.0 - rho) * (p * (1.0 - q) + q * (1.0 - p)));
      }
    }
  }
}

TEST(ZRho, EndpointIsTwoPointMixture) {
  for (double p : {0.1, 0.3, 0.8}) {
    for (double q : {0.2, 0.9}) {
      const double a = p * q + std::sqrt(p * q * (1 - p) * (1 - q));
      expect_near_vec(z_rho(p, q, 1.0).vector(), {1 - a, 0.0, a}, 1e-15);
    }
  }
}

TEST(StatisticId, ParseRoundTrip) {
  for (const char* s : {"C1_GF", "C2_GF", "Z1_GF", "Z2_GF", "P_GF", "C1_ED", "C2_ED", "Z1_ED",
                        "Z2_ED", "P_ED"}) {
    EXPECT_EQ(StatisticId::parse(s).to_string(), s);
  }
  EXPECT_EQ(kind_of([] { StatisticId::parse("C3_GF"); }), ErrorKind::InvalidScenario);
  EXPECT_EQ(kind_of([] { StatisticId::parse("C1"); }), ErrorKind::InvalidScenario);
  EXPECT_EQ(kind_of([] { StatisticId::parse("Q1_ED"); }), ErrorKind::InvalidScenario);
}

TEST(Scenario, Validate) {
  SimScenario s = small({"C1_GF"});
  EXPECT_NO_THROW(s.validate());
  s.alpha = 0.0;
  EXPECT_EQ(kind_of([&] { s.validate(); }), ErrorKind::InvalidScenario);
  s = small({});
  EXPECT_EQ(kind_of([&] { s.validate(); }), ErrorKind::InvalidScenario);
  s = small({"C1_GF"});
  s.L = 0;
  EXPECT_EQ(kind_of([&] { s.validate(); }), ErrorKind::InvalidScenario);
}

TEST(SampleScenario, DeterministicPerIndex) {
  const SimScenario s = small({"C1_GF"});
  const Replicate a = sample_scenario(s, 7);
  const Replicate b = sample_scenario(s, 7);
  const Replicate c = sample_scenario(s, 8);
  EXPECT_EQ(a.x1, b.x1);
  EXPECT_EQ(a.x2, b.x2);
  EXPECT_EQ(a.y, b.y);
  EXPECT_NE(a.x1, c.x1);
  EXPECT_EQ(a.x1.size(), 50u);
  EXPECT_EQ(a.y.size(), 50u);
}

TEST(SampleScenario, YFollowsZ) {
  SimScenario s = small({"C1_GF"});
  s.n3 = 1000000;
  const Replicate r = sample_scenario(s, 0);
  expect_near_vec(tally3(r.y), z_rho(0.3, 0.8, 0.0).vector(), 0.005);
}

TEST(SampleScenario, FullCorrelationLeavesMiddleEmpty) {
  SimScenario s = small({"C1_GF"});
  s.rho = 1.0;
  s.n3 = 10000;
  const Replicate r = sample_scenario(s, 3);
  EXPECT_EQ(std::count(r.y.begin(), r.y.end(), 1), 0);
}

TEST(Run, AlphaOneRejectsEverything) {
  SimScenario s = small({"C1_GF", "P_ED"}, 50);
  s.n1 = s.n2 = s.n3 = 500;
  s.alpha = 1.0;
  for (const auto& r : run(s)) EXPECT_EQ(r.proportion, 1.0) << r.id.to_string();
}

TEST(Run, IndependentOfThreadCount) {
  const SimScenario s = small({"C1_GF", "C2_ED", "Z2_GF", "P_GF", "P_ED"}, 300);
  const auto serial = run(s, 1);
  const auto parallel = run(s, 4);
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(serial[i].rejections, parallel[i].rejections);
    EXPECT_EQ(serial[i].fallback_count, parallel[i].fallback_count);
    EXPECT_EQ(serial[i].proportion, parallel[i].proportion);
  }
  const auto again = run(s, 3);
  for (std::size_t i = 0; i < serial.size(); ++i) EXPECT_EQ(serial[i].rejections, again[i].rejections);
}

TEST(Run, StandardErrorBound) {
  const SimScenario s = small({"C1_GF", "P_GF"}, 400);
  for (const auto& r : run(s)) {
    EXPECT_LE(r.std_error, std::sqrt(0.25 / 400) + 1e-15);
    EXPECT_DOUBLE_EQ(r.std_error, std::sqrt(r.proportion * (1 - r.proportion) / 400));
  }
}

TEST(Run, SingleStatisticWrapper) {
  const SimScenario s = small({"C1_GF", "P_GF"}, 100);
  const auto all = run(s);
  EXPECT_EQ(rejection_proportion(s, StatisticId::parse("P_GF")).rejections, all[1].rejections);
}

TEST(Run, OracleStatisticsAreCalibrated) {
  SimScenario s = small({"Z2_GF", "Z2_ED"}, 10000);
  s.n1 = s.n2 = s.n3 = 2000;
  for (const auto& r : run(s, 0)) {
    const double se = std::sqrt(0.05 * 0.95 / 10000);
    EXPECT_NEAR(r.proportion, 0.05, 3 * se) << r.id.to_string();
  }
}

TEST(Run, PowerGrowsWithRho) {
  SimScenario s = small({"C2_ED"}, 300);
  s.n1 = s.n2 = s.n3 = 30;
  const auto rows = sweep(s, SweepAxis::Rho, {0.0, 0.3, 0.6});
  EXPECT_LT(rows[0].results[0].proportion, rows[1].results[0].proportion);
  EXPECT_LT(rows[1].results[0].proportion, rows[2].results[0].proportion);
}

TEST(Sweep, AxesAndScaling) {
  EXPECT_EQ(parse_axis("rho"), SweepAxis::Rho);
  EXPECT_EQ(parse_axis("m"), SweepAxis::M);
  EXPECT_EQ(parse_axis("p"), SweepAxis::P);
  EXPECT_EQ(to_string(SweepAxis::M), "m");
  EXPECT_EQ(kind_of([] { parse_axis("q"); }), ErrorKind::InvalidScenario);

  SimScenario s = small({"P_GF"}, 20);
  s.n1 = 10;
  s.n2 = 20;
  s.n3 = 40;
  const auto rows = sweep(s, SweepAxis::M, {10, 30});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].value, 30.0);
  EXPECT_EQ(kind_of([&] { sweep(s, SweepAxis::M, {}); }), ErrorKind::InvalidScenario);
}

TEST(Sweep, CsvFormat) {
  const SimScenario s = small({"C1_GF", "P_GF"}, 20);
  const auto rows = sweep(s, SweepAxis::Rho, {0.0, 0.5});
  std::ostringstream a, b;
  write_csv(a, rows);
  write_csv(b, sweep(s, SweepAxis::Rho, {0.0, 0.5}, 4));
  EXPECT_EQ(a.str(), b.str());
  std::istringstream in(a.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "sweep_value,statistic_id,proportion,stderr,fallback_count");
  int n = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 4);
    ++n;
  }
  EXPECT_EQ(n, 4);
}
