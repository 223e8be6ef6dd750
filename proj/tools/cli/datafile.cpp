#include "cli/datafile.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace convstat::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

bool to_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size() && std::isfinite(out);
}

double number(const std::string& s, std::size_t line, const char* what) {
  double v = 0.0;
  if (!to_double(s, v)) throw InputError(line, std::string("invalid ") + what + " '" + s + "'");
  return v;
}

std::int64_t integer(const std::string& s, std::size_t line, const char* what) {
  const double v = number(s, line, what);
  if (v != std::floor(v) || std::abs(v) > 9.0e15) {
    throw InputError(line, std::string(what) + " must be an integer, got '" + s + "'");
  }
  return static_cast<std::int64_t>(v);
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(0, "cannot open '" + path + "'");
  return in;
}

}  // namespace

SampleSet parse_long_csv(std::istream& in) {
  SampleSet set;
  std::map<std::string, std::size_t> index;
  std::map<std::string, std::pair<std::int64_t, std::size_t>> coeffs;
  std::map<std::string, std::pair<std::size_t, std::size_t>> supports;

  auto variable = [&](const std::string& id) -> RawVariable& {
    auto [it, fresh] = index.try_emplace(id, set.variables.size());
    if (fresh) set.variables.push_back({id, {}, 1, std::nullopt});
    return set.variables[it->second];
  };

  std::string raw;
  std::size_t line = 0;
  bool seen_row = false;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw);
    if (text.empty()) continue;
    if (text[0] == '#') {
      const auto w = words(text.substr(1));
      if (w.empty()) continue;
      if (w[0] == "coeff") {
        if (w.size() != 3) throw InputError(line, "expected '#coeff <id> <a>'");
        const std::int64_t a = integer(w[2], line, "coefficient");
        if (a == 0) throw InputError(line, "coefficient must be nonzero");
        coeffs[w[1]] = {a, line};
      } else if (w[0] == "offset") {
        if (w.size() != 2) throw InputError(line, "expected '#offset <a0>'");
        set.offset = number(w[1], line, "offset");
      } else if (w[0] == "lattice") {
        if (w.size() != 2) throw InputError(line, "expected '#lattice <zeta>'");
        set.lattice = number(w[1], line, "lattice unit");
        if (set.lattice <= 0.0) throw InputError(line, "lattice unit must be positive");
      } else if (w[0] == "support") {
        if (w.size() != 3) throw InputError(line, "expected '#support <id> <r>'");
        const std::int64_t r = integer(w[2], line, "support");
        if (r < 0) throw InputError(line, "support must be non-negative");
        supports[w[1]] = {static_cast<std::size_t>(r), line};
      }
      continue;
    }
    const auto fields = split(text, ',');
    if (fields.size() != 2) {
      throw InputError(line, "expected 'variable_id,value', got " +
                                 std::to_string(fields.size()) + " field(s)");
    }
    double v = 0.0;
    if (!seen_row && !to_double(fields[1], v)) {
      seen_row = true;  // header row
      continue;
    }
    seen_row = true;
    if (fields[0].empty()) throw InputError(line, "empty variable id");
    variable(fields[0]).values.push_back(number(fields[1], line, "value"));
  }
  if (set.variables.empty()) throw InputError(line, "no observations found");

  for (const auto& [id, c] : coeffs) {
    if (!index.count(id)) throw InputError(c.second, "#coeff for unknown variable '" + id + "'");
    set.variables[index[id]].coefficient = c.first;
  }
  for (const auto& [id, r] : supports) {
    if (!index.count(id)) throw InputError(r.second, "#support for unknown variable '" + id + "'");
    set.variables[index[id]].support = r.first;
  }
  return set;
}

SampleSet read_long_csv(const std::string& path) {
  auto in = open(path);
  return parse_long_csv(in);
}

PairedTable parse_paired_csv(std::istream& in) {
  PairedTable table;
  std::string raw;
  std::size_t line = 0;
  bool first = true;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw);
    if (text.empty() || text[0] == '#') continue;
    const auto fields = split(text, ',');
    if (first) {
      first = false;
      double v = 0.0;
      const bool header = std::any_of(fields.begin(), fields.end(),
                                      [&](const std::string& f) { return !to_double(f, v); });
      table.columns.resize(fields.size());
      if (header) {
        table.names = fields;
        continue;
      }
      for (std::size_t i = 0; i < fields.size(); ++i) table.names.push_back("X" + std::to_string(i + 1));
    }
    if (fields.size() != table.columns.size()) {
      throw InputError(line, "row has " + std::to_string(fields.size()) + " fields, expected " +
                                 std::to_string(table.columns.size()));
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      table.columns[i].push_back(number(fields[i], line, "value"));
    }
  }
  if (table.columns.empty() || table.columns[0].empty()) throw InputError(line, "no rows found");
  return table;
}

PairedTable read_paired_csv(const std::string& path) {
  auto in = open(path);
  return parse_paired_csv(in);
}

std::vector<double> parse_number_list(const std::string& text) {
  std::string spaced = text;
  std::replace(spaced.begin(), spaced.end(), ',', ' ');
  std::vector<double> out;
  for (const auto& w : words(spaced)) out.push_back(number(w, 0, "number"));
  if (out.empty()) throw InputError(0, "empty number list");
  return out;
}

std::vector<double> read_vector_arg(const std::string& arg) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) {
    auto in = open(arg);
    std::string all, raw;
    while (std::getline(in, raw)) {
      const std::string t = trim(raw);
      if (!t.empty() && t[0] != '#') all += t + " ";
    }
    return parse_number_list(all);
  }
  return parse_number_list(arg);
}

}  // namespace convstat::cli
