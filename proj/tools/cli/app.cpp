#include "cli/app.hpp"

#include <algorithm>
#include <fstream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli/datafile.hpp"
#include "cli/report_io.hpp"
#include "convstat/error.hpp"
#include "convstat/hyptest.hpp"
#include "convstat/polyrank.hpp"
#include "convstat/simlab.hpp"

namespace convstat::cli {

namespace {

struct Options {
  std::string data;
  std::string data_y;
  std::string z;
  std::string rank = "analytic";
  bool json = false;
  std::vector<std::string> pmvs;
  std::vector<std::string> y_pmvs;
  double tol = kDefaultGcdTol;
  std::string config;
  std::string out_prefix;
  unsigned threads = 1;
};

void emit(std::ostream& out, const TestReport& rep, bool json) {
  if (json) {
    out << to_json(rep).dump(2) << "\n";
  } else {
    print_text(out, rep);
  }
}

int cmd_gof(const Options& o, std::ostream& out) {
  const CanonicalSamples x = canonicalize(read_long_csv(o.data));
  const Pmv z(read_vector_arg(o.z));
  emit(out, gof_test(x, z, RankPolicy::parse(o.rank)), o.json);
  return kExitOk;
}

int cmd_ed(const Options& o, std::ostream& out) {
  const CanonicalSamples x = canonicalize(read_long_csv(o.data));
  const CanonicalSamples y = canonicalize(read_long_csv(o.data_y));
  emit(out, ed_test(x, y, RankPolicy::parse(o.rank)), o.json);
  return kExitOk;
}

int cmd_subind(const Options& o, std::ostream& out) {
  const PairedTable table = read_paired_csv(o.data);
  SampleSet set;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    set.variables.push_back({table.names[i], table.columns[i], 1, std::nullopt});
  }
  const CanonicalSamples canon = canonicalize(set);
  std::vector<std::vector<std::int64_t>> columns;
  std::vector<std::size_t> supports;
  for (const auto& v : canon.variables) {
    columns.push_back(v.values);
    supports.push_back(v.support_max);
  }
  TestReport rep = subind_test(columns, supports);
  rep.x_offset = canon.total_offset;
  emit(out, rep, o.json);
  return kExitOk;
}

std::vector<Pmv> empirical_side(const std::string& path) {
  const CanonicalSamples c = canonicalize(read_long_csv(path));
  std::vector<Pmv> out;
  for (const auto& v : c.variables) out.push_back(empirical_pmv(v.values, v.support_max).pmv);
  return out;
}

int cmd_rank(const Options& o, std::ostream& out) {
  std::vector<Pmv> x;
  std::vector<Pmv> y;
  for (const auto& lit : o.pmvs) x.emplace_back(parse_number_list(lit));
  for (const auto& lit : o.y_pmvs) y.emplace_back(parse_number_list(lit));
  if (!o.data.empty()) {
    auto e = empirical_side(o.data);
    x.insert(x.end(), e.begin(), e.end());
  }
  if (!o.data_y.empty()) {
    auto e = empirical_side(o.data_y);
    y.insert(y.end(), e.begin(), e.end());
  }
  if (x.empty()) throw InputError(0, "give PMVs with --pmv or a data file with --data");
  const RankReport rep =
      y.empty() ? covariance_rank(x, std::nullopt, o.tol)
                : covariance_rank(x, std::span<const Pmv>(y), o.tol);
  if (o.json) {
    out << to_json(rep).dump(2) << "\n";
  } else {
    print_text(out, rep);
  }
  return kExitOk;
}

SimScenario scenario_from_json(const nlohmann::json& j) {
  SimScenario scn;
  scn.p = j.value("p", scn.p);
  scn.q = j.value("q", scn.q);
  scn.rho = j.value("rho", scn.rho);
  scn.n1 = j.value("n1", scn.n1);
  scn.n2 = j.value("n2", scn.n2);
  scn.n3 = j.value("n3", scn.n3);
  scn.L = j.value("L", scn.L);
  scn.alpha = j.value("alpha", scn.alpha);
  scn.seed = j.value("seed", scn.seed);
  if (j.contains("statistics")) {
    for (const auto& s : j.at("statistics")) scn.statistics.push_back(StatisticId::parse(s.get<std::string>()));
  } else {
    for (const char* s : {"C1_GF", "C2_GF", "Z1_GF", "Z2_GF", "P_GF",
                          "C1_ED", "C2_ED", "Z1_ED", "Z2_ED", "P_ED"}) {
      scn.statistics.push_back(StatisticId::parse(s));
    }
  }
  return scn;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  std::ifstream in(o.config);
  if (!in) throw InputError(0, "cannot open '" + o.config + "'");
  nlohmann::json cfg;
  try {
    cfg = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(0, std::string("config is not valid JSON: ") + e.what());
  }
  SimScenario scn;
  SweepAxis axis = SweepAxis::Rho;
  std::vector<double> grid;
  try {
    scn = scenario_from_json(cfg);
    if (cfg.contains("sweep")) {
      axis = parse_axis(cfg.at("sweep").at("axis").get<std::string>());
      grid = cfg.at("sweep").at("values").get<std::vector<double>>();
    } else {
      grid = {scn.rho};
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(0, std::string("bad config: ") + e.what());
  }

  const auto rows = sweep(scn, axis, grid, o.threads);
  const std::string csv_path = o.out_prefix + ".csv";
  const std::string json_path = o.out_prefix + ".json";
  {
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw InputError(0, "cannot write '" + csv_path + "'");
    write_csv(csv, rows);
  }
  {
    std::ofstream js(json_path, std::ios::binary);
    if (!js) throw InputError(0, "cannot write '" + json_path + "'");
    js << to_json(axis, rows).dump(2) << "\n";
  }
  out << "wrote " << csv_path << " and " << json_path << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete-convolution tests for sums of independent integer variables"};
  app.require_subcommand(1);
  Options o;

  auto* gof = app.add_subcommand("gof", "Goodness of fit of the sum to a hypothesized PMV");
  gof->add_option("data", o.data, "Long-format CSV (variable_id,value)")->required();
  gof->add_option("--z", o.z, "Hypothesized PMV on {0..s}: literal list or file")->required();
  gof->add_option("--rank", o.rank, "analytic | numeric | lower | fixed:N");
  gof->add_flag("--json", o.json, "Print a JSON report");

  auto* ed = app.add_subcommand("ed", "Equality in distribution of two sums");
  ed->add_option("x", o.data, "X side long-format CSV")->required();
  ed->add_option("y", o.data_y, "Y side long-format CSV")->required();
  ed->add_option("--rank", o.rank, "analytic | numeric | lower | fixed:N");
  ed->add_flag("--json", o.json, "Print a JSON report");

  auto* sub = app.add_subcommand("subind", "Sub-independence test on paired data");
  sub->add_option("data", o.data, "Wide CSV, one column per variable")->required();
  sub->add_flag("--json", o.json, "Print a JSON report");

  auto* rank = app.add_subcommand("rank", "Covariance rank of Psi or Psi + Xi");
  rank->add_option("--pmv", o.pmvs, "X side PMV literal, repeatable");
  rank->add_option("--y-pmv", o.y_pmvs, "Y side PMV literal, repeatable");
  rank->add_option("--data", o.data, "X side data file (empirical PMVs)");
  rank->add_option("--y-data", o.data_y, "Y side data file (empirical PMVs)");
  rank->add_option("--tol", o.tol, "Relative singular value threshold for the gcd");
  rank->add_flag("--json", o.json, "Print a JSON report");

  auto* sim = app.add_subcommand("simulate", "Monte Carlo rejection proportions");
  sim->add_option("config", o.config, "JSON scenario file")->required();
  sim->add_option("--out", o.out_prefix, "Output prefix for .csv and .json")->required();
  sim->add_option("--threads", o.threads, "Worker threads (0 = all cores)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*gof) return cmd_gof(o, out);
    if (*ed) return cmd_ed(o, out);
    if (*sub) return cmd_subind(o, out);
    if (*rank) return cmd_rank(o, out);
    if (*sim) return cmd_simulate(o, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_numerical(e.kind()) ? kExitNumerical : kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitInput;
}

}  // namespace convstat::cli
