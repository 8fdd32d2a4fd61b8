#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "exrmt/arithmetic.hpp"
#include "exrmt/haar.hpp"
#include "exrmt/spectral.hpp"
#include "exrmt/theory.hpp"
#include "exrmt/zeros.hpp"

namespace exrmt {

// Malformed configuration or flags (exit code 2).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using json = nlohmann::ordered_json;

inline const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> k = {"sample", "onelevel", "paircorr", "firsteig", "excise",
                                             "discriminants", "neff", "compare"};
  return k;
}

struct RunConfig {
  std::string experiment;
  std::optional<GroupSpec> group;
  std::optional<FamilySpec> family;
  std::uint64_t count = 1000;
  std::uint64_t seed = 0;
  std::size_t bins = 100;
  std::string out;
  double window = 5.0;
  double hi = 0.0;  // histogram upper edge; 0 selects the experiment default
  bool exclude_forced_zero = false;
  std::optional<ExcisionRule> excision;
  std::string coefficients;  // JSON file of CoefficientInputs fields
  std::map<std::string, double> coefficient_values;
  bool l2 = false;
  std::string input;
  std::string zeros;
  std::string ensemble;
  std::string zeros_out;
  std::string report;
  std::string selector = "lowest";
  double vanish_tol = kDefaultVanishTol;
  std::optional<unsigned> threads;

  bool operator==(const RunConfig&) const = default;
};

namespace detail {

inline void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw UsageError(where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw UsageError(where + ": unknown key '" + it.key() + "'");
}

template <class T>
T get_as(const json& j, const char* key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(where + "." + key + ": " + e.what());
  }
}

}  // namespace detail

inline const std::vector<std::pair<const char*, opt CoefficientInputs::*>>& coefficient_fields() {
  using C = CoefficientInputs;
  static const std::vector<std::pair<const char*, opt C::*>> f = {
      {"a1", &C::a1}, {"a2", &C::a2}, {"a3", &C::a3}, {"a4", &C::a4}, {"b1", &C::b1}, {"b2", &C::b2},
      {"c1", &C::c1}, {"c2", &C::c2}, {"d1", &C::d1}, {"A1_00", &C::A1_00}, {"Bp0", &C::Bp0}, {"Bpp0", &C::Bpp0},
      {"Lp_sym", &C::Lp_sym}, {"Lpp_sym", &C::Lpp_sym}, {"Lp_chi", &C::Lp_chi}, {"Lpp_chi", &C::Lpp_chi},
      {"xi0", &C::xi0}, {"xi1", &C::xi1}, {"L1_chi", &C::L1_chi}, {"L1_ad", &C::L1_ad},
      {"digamma_k2", &C::digamma_k2}, {"A1_00_bar", &C::A1_00_bar}, {"Lp_chi_bar", &C::Lp_chi_bar},
      {"Lp_sym_bar", &C::Lp_sym_bar}, {"eta_f", &C::eta_f}, {"eta_fbar", &C::eta_fbar},
      {"Atilde_00", &C::Atilde_00}, {"Atilde_00_bar", &C::Atilde_00_bar}, {"Btilde_p0", &C::Btilde_p0},
      {"Btilde_p0_bar", &C::Btilde_p0_bar}, {"L1_chi_bar", &C::L1_chi_bar}, {"L1_sym", &C::L1_sym},
      {"L1_sym_bar", &C::L1_sym_bar}, {"L1_ad_bar", &C::L1_ad_bar}, {"Lprime1_sym", &C::Lprime1_sym},
      {"Lprime1_sym_bar", &C::Lprime1_sym_bar}, {"mean_e1", &C::mean_e1}, {"mean_e2", &C::mean_e2}, {"R", &C::R}};
  return f;
}

// Builds CoefficientInputs from name/value pairs; "k", "euler_gamma" and "stieltjes1" are also accepted.
inline CoefficientInputs coefficients_from_map(const std::map<std::string, double>& m) {
  CoefficientInputs c;
  for (const auto& [name, value] : m) {
    if (name == "k") {
      c.k = static_cast<int>(value);
      continue;
    }
    if (name == "euler_gamma") {
      c.euler_gamma = value;
      continue;
    }
    if (name == "stieltjes1") {
      c.stieltjes1 = value;
      continue;
    }
    bool found = false;
    for (const auto& [fname, member] : coefficient_fields())
      if (name == fname) {
        c.*member = value;
        found = true;
      }
    if (!found) throw UsageError("coefficients: unknown key '" + name + "'");
  }
  return c;
}

inline std::map<std::string, double> coefficient_map_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw UsageError(where + ": expected an object");
  std::map<std::string, double> m;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_number()) throw UsageError(where + "." + it.key() + ": expected a number");
    m[it.key()] = it.value().get<double>();
  }
  coefficients_from_map(m);  // validates names
  return m;
}

inline json to_json(const RunConfig& c) {
  json j;
  j["experiment"] = c.experiment;
  if (c.group) j["group"] = {{"name", group_name(c.group->group)}, {"n", c.group->half_size}};
  if (c.family)
    j["family"] = {{"M", c.family->M},       {"k", c.family->k},
                   {"case", case_name(c.family->symmetry)}, {"epsilon_f", c.family->epsilon_f},
                   {"Delta", c.family->Delta}, {"X", c.family->X},
                   {"negative", c.family->negative}};
  j["count"] = c.count;
  j["seed"] = c.seed;
  j["bins"] = c.bins;
  j["out"] = c.out;
  j["window"] = c.window;
  j["hi"] = c.hi;
  j["exclude_forced_zero"] = c.exclude_forced_zero;
  if (c.excision) j["excision"] = {{"c", c.excision->c}, {"k", c.excision->k}, {"n_std", c.excision->n_std}};
  j["coefficients"] = c.coefficients;
  if (!c.coefficient_values.empty()) {
    json v = json::object();
    for (const auto& [k, x] : c.coefficient_values) v[k] = x;
    j["coefficient_values"] = v;
  }
  j["l2"] = c.l2;
  j["input"] = c.input;
  j["zeros"] = c.zeros;
  j["ensemble"] = c.ensemble;
  j["zeros_out"] = c.zeros_out;
  j["report"] = c.report;
  j["selector"] = c.selector;
  j["vanish_tol"] = c.vanish_tol;
  if (c.threads) j["threads"] = *c.threads;
  return j;
}

inline void validate(const RunConfig& c) {
  const auto& kinds = experiment_kinds();
  if (std::find(kinds.begin(), kinds.end(), c.experiment) == kinds.end())
    throw UsageError("unknown experiment '" + c.experiment + "'");
  const bool needs_group = c.experiment == "sample" || c.experiment == "onelevel" || c.experiment == "paircorr" ||
                           c.experiment == "firsteig";
  if (needs_group && !c.group) throw UsageError(c.experiment + ": a group is required");
  if (c.group && c.group->half_size < 1) throw UsageError("group.n must be >= 1");
  if (needs_group && c.count < 1) throw UsageError("count must be >= 1");
  if (c.bins < 1) throw UsageError("bins must be >= 1");
  if (!(c.window > 0)) throw UsageError("window must be positive");
  if (c.experiment == "discriminants" && !c.family) throw UsageError("discriminants: a family is required");
  if (c.family) {
    try {
      c.family->validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (c.experiment == "excise" && !c.excision) throw UsageError("excise: an excision rule is required");
  if (c.excision && !(c.excision->c >= 0)) throw UsageError("excision.c must be nonnegative");
  parse_selector(c.selector);
  if (c.threads && *c.threads < 1) throw UsageError("threads must be >= 1");
}

inline RunConfig config_from_json(const json& j) {
  static const std::set<std::string> top = {"experiment", "group", "family", "count", "seed", "bins", "out",
                                            "window", "hi", "exclude_forced_zero", "excision", "coefficients",
                                            "coefficient_values", "l2", "input", "zeros", "ensemble", "zeros_out",
                                            "report", "selector", "vanish_tol", "threads"};
  detail::reject_unknown(j, top, "config");
  RunConfig c;
  if (!j.contains("experiment")) throw UsageError("config: 'experiment' is required");
  c.experiment = detail::get_as<std::string>(j, "experiment", "config");
  if (j.contains("group")) {
    const auto& g = j.at("group");
    detail::reject_unknown(g, {"name", "n"}, "config.group");
    try {
      c.group = GroupSpec{parse_group(detail::get_as<std::string>(g, "name", "config.group")),
                          detail::get_as<int>(g, "n", "config.group")};
    } catch (const UsageError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (j.contains("family")) {
    const auto& f = j.at("family");
    detail::reject_unknown(f, {"M", "k", "case", "epsilon_f", "Delta", "X", "negative"}, "config.family");
    FamilySpec s;
    s.M = detail::get_as<std::int64_t>(f, "M", "config.family");
    if (f.contains("k")) s.k = detail::get_as<int>(f, "k", "config.family");
    try {
      s.symmetry = parse_case(detail::get_as<std::string>(f, "case", "config.family"));
    } catch (const UsageError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (f.contains("epsilon_f")) s.epsilon_f = detail::get_as<int>(f, "epsilon_f", "config.family");
    if (f.contains("Delta")) s.Delta = detail::get_as<int>(f, "Delta", "config.family");
    s.X = detail::get_as<std::int64_t>(f, "X", "config.family");
    if (f.contains("negative")) s.negative = detail::get_as<bool>(f, "negative", "config.family");
    c.family = s;
  }
  auto opt_get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = detail::get_as<std::decay_t<decltype(field)>>(j, key, "config");
  };
  opt_get("count", c.count);
  opt_get("seed", c.seed);
  opt_get("bins", c.bins);
  opt_get("out", c.out);
  opt_get("window", c.window);
  opt_get("hi", c.hi);
  opt_get("exclude_forced_zero", c.exclude_forced_zero);
  if (j.contains("excision")) {
    const auto& e = j.at("excision");
    detail::reject_unknown(e, {"c", "k", "n_std"}, "config.excision");
    c.excision = ExcisionRule{detail::get_as<double>(e, "c", "config.excision"),
                              detail::get_as<int>(e, "k", "config.excision"),
                              detail::get_as<double>(e, "n_std", "config.excision")};
  }
  opt_get("coefficients", c.coefficients);
  if (j.contains("coefficient_values"))
    c.coefficient_values = coefficient_map_from_json(j.at("coefficient_values"), "config.coefficient_values");
  opt_get("l2", c.l2);
  opt_get("input", c.input);
  opt_get("zeros", c.zeros);
  opt_get("ensemble", c.ensemble);
  opt_get("zeros_out", c.zeros_out);
  opt_get("report", c.report);
  opt_get("selector", c.selector);
  opt_get("vanish_tol", c.vanish_tol);
  if (j.contains("threads")) c.threads = detail::get_as<unsigned>(j, "threads", "config");
  try {
    validate(c);
  } catch (const UsageError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return c;
}

inline std::string serialize(const RunConfig& c) { return to_json(c).dump(2) + "\n"; }

inline RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("config: invalid JSON: ") + e.what());
  }
  return config_from_json(j);
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open config " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

}  // namespace exrmt
