#include "cli/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <fmt/format.h>

namespace convstat::cli {

namespace {

constexpr double kSpreadHint = 1e-4;
constexpr std::size_t kSmallSample = 30;

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out += (i ? " " : "") + fmt::format("{:.6g}", v[i]);
  }
  return out;
}

}  // namespace

nlohmann::json to_json(const TestReport& rep) {
  nlohmann::json j;
  j["test"] = rep.test;
  j["statistic"] = std::isfinite(rep.statistic) ? nlohmann::json(rep.statistic) : nlohmann::json();
  j["dof"] = rep.dof;
  j["p_value"] = rep.p_value;
  j["rank_policy"] = rep.policy.to_string();
  j["fallback_used"] = rep.fallback_used;
  j["deterministic_rejection"] = rep.deterministic_rejection;
  j["padded"] = rep.padded;
  j["s"] = rep.s;
  j["m"] = rep.m;
  j["eigenvalues"] = rep.eigenvalues;
  j["numeric_rank"] = rep.numeric_rank;
  j["analytic_rank"] = rep.analytic_rank ? nlohmann::json(*rep.analytic_rank) : nlohmann::json();
  j["lower_bound"] = rep.lower_bound;
  j["x_offset"] = rep.x_offset;
  j["y_offset"] = rep.y_offset ? nlohmann::json(*rep.y_offset) : nlohmann::json();
  j["warnings"] = rep.warnings;
  return j;
}

TestReport report_from_json(const nlohmann::json& j) {
  TestReport rep;
  rep.test = j.at("test").get<std::string>();
  rep.statistic = j.at("statistic").is_null() ? std::numeric_limits<double>::infinity()
                                              : j.at("statistic").get<double>();
  rep.dof = j.at("dof").get<std::size_t>();
  rep.p_value = j.at("p_value").get<double>();
  rep.policy = RankPolicy::parse(j.at("rank_policy").get<std::string>());
  rep.fallback_used = j.at("fallback_used").get<bool>();
  rep.deterministic_rejection = j.at("deterministic_rejection").get<bool>();
  rep.padded = j.at("padded").get<bool>();
  rep.s = j.at("s").get<std::size_t>();
  rep.m = j.at("m").get<std::size_t>();
  rep.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
  rep.numeric_rank = j.at("numeric_rank").get<std::size_t>();
  if (!j.at("analytic_rank").is_null()) rep.analytic_rank = j.at("analytic_rank").get<std::size_t>();
  rep.lower_bound = j.at("lower_bound").get<std::size_t>();
  rep.x_offset = j.at("x_offset").get<std::int64_t>();
  if (!j.at("y_offset").is_null()) rep.y_offset = j.at("y_offset").get<std::int64_t>();
  rep.warnings = j.at("warnings").get<std::vector<std::string>>();
  return rep;
}

nlohmann::json to_json(const RankReport& rep) {
  nlohmann::json j;
  j["s"] = rep.s;
  j["gcd_degree"] = rep.gcd_degree;
  j["analytic_rank"] = rep.analytic_rank ? nlohmann::json(*rep.analytic_rank) : nlohmann::json();
  j["lower_bound"] = rep.lower_bound;
  j["numeric_rank"] = rep.numeric_rank;
  j["zero_index_sets"] = rep.zero_index_sets;
  j["eigenvalues"] = std::vector<double>(rep.eigenvalues.data(),
                                         rep.eigenvalues.data() + rep.eigenvalues.size());
  return j;
}

nlohmann::json to_json(SweepAxis axis, const std::vector<SweepRow>& rows) {
  nlohmann::json j;
  j["axis"] = to_string(axis);
  j["rows"] = nlohmann::json::array();
  for (const auto& row : rows) {
    for (const auto& r : row.results) {
      j["rows"].push_back({{"sweep_value", row.value},
                           {"statistic_id", r.id.to_string()},
                           {"proportion", r.proportion},
                           {"stderr", r.std_error},
                           {"fallback_count", r.fallback_count},
                           {"impossible_count", r.impossible_count}});
    }
  }
  return j;
}

std::vector<std::string> usage_hints(const TestReport& rep) {
  std::vector<std::string> hints;
  if (rep.deterministic_rejection) return hints;
  if (rep.fallback_used) {
    hints.push_back("all variables were constant in the sample, so Pearson's statistic "
                    "was reported; collect more data before relying on the convolution test");
    return hints;
  }
  const auto& ev = rep.eigenvalues;
  if (rep.test != "subind" && rep.dof >= 2 && ev.size() >= rep.dof && ev.front() > 0.0) {
    const double ratio = ev[rep.dof - 1] / ev.front();
    if (ratio < kSpreadHint) {
      hints.push_back(fmt::format(
          "the smallest retained eigenvalue is {:.3g} of the largest; the PGF roots may be "
          "close, and a reduced rank (--rank fixed:{}) keeps the type I error in check",
          ratio, rep.dof - 1));
    }
  }
  if (rep.m < kSmallSample && rep.test != "subind") {
    hints.push_back("small sample: the full-rank statistic tends to be anti-conservative; "
                    "a reduced rank is safer, and Pearson's test is an option only if every "
                    "expected count is at least 1");
  }
  if (rep.policy.kind == RankPolicy::Kind::Fixed && rep.analytic_rank &&
      rep.policy.r > *rep.analytic_rank) {
    hints.push_back(fmt::format("the fixed rank {} exceeds the analytic rank {} of the "
                                "estimated PMVs",
                                rep.policy.r, *rep.analytic_rank));
  }
  return hints;
}

void print_text(std::ostream& out, const TestReport& rep) {
  out << fmt::format("test:        {}\n", rep.test);
  out << fmt::format("statistic:   {:.6g}\n", rep.statistic);
  out << fmt::format("dof:         {} (rank policy {})\n", rep.dof, rep.policy.to_string());
  out << fmt::format("p-value:     {:.6g}\n", rep.p_value);
  out << fmt::format("m:           {}\n", rep.m);
  out << fmt::format("s:           {}\n", rep.s);
  if (!rep.eigenvalues.empty()) {
    out << fmt::format("numeric rank {}, analytic rank {}, lower bound {}\n", rep.numeric_rank,
                       rep.analytic_rank ? std::to_string(*rep.analytic_rank) : "n/a",
                       rep.lower_bound);
    out << "eigenvalues: " << join(rep.eigenvalues) << "\n";
  }
  out << "offset:      " << rep.x_offset;
  if (rep.y_offset) out << " (x) vs " << *rep.y_offset << " (y)";
  out << "\n";
  if (rep.fallback_used) out << "fallback:    Pearson statistic\n";
  if (rep.deterministic_rejection) out << "rejected deterministically: offsets differ\n";
  for (const auto& w : rep.warnings) out << "warning: " << w << "\n";
  for (const auto& h : usage_hints(rep)) out << "hint: " << h << "\n";
}

void print_text(std::ostream& out, const RankReport& rep) {
  out << fmt::format("s:            {}\n", rep.s);
  out << fmt::format("gcd degree:   {}\n", rep.gcd_degree);
  if (rep.analytic_rank) {
    out << fmt::format("analytic rank {}\n", *rep.analytic_rank);
  } else {
    out << fmt::format("lower bound:  {} (some PMV has zero cells, so only the bound "
                       "s - deg gcd - sum |L_i| is available)\n",
                       rep.lower_bound);
    for (std::size_t i = 0; i < rep.zero_index_sets.size(); ++i) {
      if (rep.zero_index_sets[i].empty()) continue;
      std::string cells;
      for (auto c : rep.zero_index_sets[i]) cells += (cells.empty() ? "" : " ") + std::to_string(c);
      out << fmt::format("  PMV {} zero cells: {}\n", i + 1, cells);
    }
  }
  out << fmt::format("numeric rank: {}\n", rep.numeric_rank);
  std::vector<double> ev(rep.eigenvalues.data(), rep.eigenvalues.data() + rep.eigenvalues.size());
  out << "eigenvalues:  " << join(ev) << "\n";
}

}  // namespace convstat::cli
