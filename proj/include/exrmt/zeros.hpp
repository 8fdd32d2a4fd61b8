#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "exrmt/stats.hpp"

namespace exrmt {

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ZeroRecord {
  std::int64_t d = 0;
  std::vector<double> ordinates;  // ascending; repeated exact zeros mark central multiplicity
  bool operator==(const ZeroRecord&) const = default;
};

inline void validate_ordinates(const std::vector<double>& g, const std::string& where) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(g[i] >= 0) || !std::isfinite(g[i])) throw DataError(where + ": ordinates must be finite and nonnegative");
    if (i > 0 && !(g[i] > g[i - 1]) && !(g[i] == 0 && g[i - 1] == 0))
      throw DataError(where + ": ordinates not strictly increasing");
  }
}

inline std::vector<ZeroRecord> read_zero_list(std::istream& is) {
  std::vector<ZeroRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::string where = "line " + std::to_string(lineno);
    std::stringstream ss(line);
    std::string field;
    ZeroRecord r;
    bool first = true;
    while (std::getline(ss, field, ',')) {
      std::size_t used = 0;
      try {
        if (first) {
          r.d = std::stoll(field, &used);
        } else {
          r.ordinates.push_back(std::stod(field, &used));
        }
      } catch (const std::exception&) {
        throw DataError(where + ": cannot parse '" + field + "'");
      }
      if (used != field.size()) throw DataError(where + ": trailing characters in '" + field + "'");
      first = false;
    }
    if (first) throw DataError(where + ": empty record");
    validate_ordinates(r.ordinates, where);
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<ZeroRecord> ingest_zero_list(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open " + path);
  return read_zero_list(is);
}

inline void write_zero_list(std::ostream& os, const std::vector<ZeroRecord>& recs) {
  for (const auto& r : recs) {
    os << r.d;
    for (double g : r.ordinates) os << ',' << format_double(g);
    os << '\n';
  }
}

enum class ZeroSelector { lowest, lowest_nonvanishing, second_lowest };

inline ZeroSelector parse_selector(const std::string& s) {
  if (s == "lowest") return ZeroSelector::lowest;
  if (s == "lowest_nonvanishing") return ZeroSelector::lowest_nonvanishing;
  if (s == "second_lowest") return ZeroSelector::second_lowest;
  throw std::invalid_argument("unknown selector '" + s + "'");
}

inline const char* selector_name(ZeroSelector s) {
  switch (s) {
    case ZeroSelector::lowest: return "lowest";
    case ZeroSelector::lowest_nonvanishing: return "lowest_nonvanishing";
    case ZeroSelector::second_lowest: return "second_lowest";
  }
  return "?";
}

inline constexpr double kDefaultVanishTol = 1e-8;

inline std::vector<double> lowest_zero_statistic(const std::vector<ZeroRecord>& recs, ZeroSelector which,
                                                 double vanish_tol = kDefaultVanishTol) {
  if (recs.empty()) throw DataError("lowest_zero_statistic: no records");
  std::vector<double> out;
  out.reserve(recs.size());
  for (const auto& r : recs) {
    const auto& g = r.ordinates;
    const std::string who = "record d=" + std::to_string(r.d);
    switch (which) {
      case ZeroSelector::lowest:
        if (g.empty()) throw DataError(who + " has no ordinates");
        out.push_back(g[0]);
        break;
      case ZeroSelector::second_lowest:
        if (g.size() < 2) throw DataError(who + " is too short for second_lowest");
        out.push_back(g[1]);
        break;
      case ZeroSelector::lowest_nonvanishing: {
        bool found = false;
        for (double x : g)
          if (x >= vanish_tol) {
            out.push_back(x);
            found = true;
            break;
          }
        if (!found) throw DataError(who + " has no non-vanishing ordinate");
        break;
      }
    }
  }
  return out;
}

}  // namespace exrmt
