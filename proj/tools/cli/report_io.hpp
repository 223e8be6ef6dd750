#ifndef CONVSTAT_CLI_REPORT_IO_HPP_
#define CONVSTAT_CLI_REPORT_IO_HPP_

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "convstat/hyptest.hpp"
#include "convstat/polyrank.hpp"
#include "convstat/simlab.hpp"

namespace convstat::cli {

/// An infinite statistic is written as null and read back as +inf.
nlohmann::json to_json(const TestReport& rep);
TestReport report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RankReport& rep);

nlohmann::json to_json(SweepAxis axis, const std::vector<SweepRow>& rows);

/// Advice derived from the report: reduced rank for ill-conditioned
/// spectra, Pearson's rule of thumb, unbalanced samples.
std::vector<std::string> usage_hints(const TestReport& rep);

void print_text(std::ostream& out, const TestReport& rep);
void print_text(std::ostream& out, const RankReport& rep);

}  // namespace convstat::cli

#endif  // CONVSTAT_CLI_REPORT_IO_HPP_
