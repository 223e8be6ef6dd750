#ifndef CONVSTAT_CLI_DATAFILE_HPP_
#define CONVSTAT_CLI_DATAFILE_HPP_

#include <cstddef>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "convstat/hyptest.hpp"

namespace convstat::cli {

/// Malformed user input, with the 1-based line it was found on (0 if none).
class InputError : public std::runtime_error {
 public:
  InputError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/**
 * Long-format CSV, one observation per row:
 *
 *   #coeff X2 -1
 *   #offset 3
 *   #lattice 0.5
 *   #support X1 4
 *   variable_id,value
 *   X1,0
 *   X2,1.5
 *
 * The header row is optional and any other line starting with '#' is a
 * comment. Variables keep their order of first appearance.
 */
SampleSet parse_long_csv(std::istream& in);
SampleSet read_long_csv(const std::string& path);

/// Wide CSV for paired data: optional header, one column per variable.
struct PairedTable {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
};

PairedTable parse_paired_csv(std::istream& in);
PairedTable read_paired_csv(const std::string& path);

/// Comma or whitespace separated numbers.
std::vector<double> parse_number_list(const std::string& text);

/// A literal list, or the contents of the file it names.
std::vector<double> read_vector_arg(const std::string& arg);

}  // namespace convstat::cli

#endif  // CONVSTAT_CLI_DATAFILE_HPP_
