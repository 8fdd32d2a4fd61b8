#pragma once

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "exrmt/arithmetic.hpp"
#include "exrmt/config.hpp"
#include "exrmt/ensemble.hpp"
#include "exrmt/report.hpp"
#include "exrmt/spectral.hpp"
#include "exrmt/stats.hpp"
#include "exrmt/theory.hpp"
#include "exrmt/zeros.hpp"

namespace exrmt {

namespace detail {

class OutputFile {
 public:
  explicit OutputFile(const std::string& path) : path_(path), os_(path, std::ios::binary) {
    if (!os_) throw DataError("cannot write " + path);
  }
  std::ostream& stream() { return os_; }
  void close() {
    os_.close();
    if (!os_) throw DataError("error writing " + path_);
  }

 private:
  std::string path_;
  std::ofstream os_;
};

inline void require_out(const RunConfig& c) {
  if (c.out.empty()) throw UsageError(c.experiment + ": --out is required");
}

inline void write_text(const std::string& path, const std::string& text) {
  OutputFile f(path);
  f.stream() << text;
  f.close();
}

struct SampleRow {
  std::string line;
  std::string zeros;
};

inline void run_sample(const RunConfig& c, unsigned workers, std::ostream& log) {
  require_out(c);
  const GroupSpec spec = *c.group;
  const int dim = spec.dimension();
  auto rows = map_spectra<SampleRow>(spec, c.count, c.seed, workers, [&](const GroupMatrix& a, const EigenangleSpectrum& s) {
    const CharPolyValue v = char_poly_at_one(a, s);
    const auto first = first_eigenangle(s, c.exclude_forced_zero);
    SampleRow r;
    std::ostringstream os;
    os << format_double(v.value.real()) << ',' << format_double(v.value.imag()) << ',' << format_double(v.magnitude)
       << ',' << (first ? format_double(*first) : std::string("nan"));
    for (double t : s.angles) os << ',' << format_double(t);
    r.line = os.str();
    std::ostringstream zs;
    for (double t : s.angles)
      if (t >= 0) zs << ',' << format_double(t);
    r.zeros = zs.str();
    return r;
  });
  OutputFile f(c.out);
  auto& os = f.stream();
  os << "index,re_det,im_det,abs_det,first_angle";
  for (int i = 0; i < dim; ++i) os << ",angle_" << i;
  os << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) os << i << ',' << rows[i].line << '\n';
  f.close();
  if (!c.zeros_out.empty()) {
    OutputFile z(c.zeros_out);
    for (std::size_t i = 0; i < rows.size(); ++i) z.stream() << i << rows[i].zeros << '\n';
    z.close();
  }
  log << "samples " << rows.size() << " group " << group_name(spec.group) << " N " << spec.half_size << '\n';
}

inline void run_density(const RunConfig& c, unsigned workers, std::ostream& log, bool pair) {
  require_out(c);
  const auto est = pair ? pair_correlation_mc(*c.group, c.count, c.seed, c.window, c.bins, workers)
                        : one_level_density_mc(*c.group, c.count, c.seed, c.bins, workers);
  OutputFile f(c.out);
  write_histogram_csv(f.stream(), est.hist.edges(), est.density);
  f.close();
  double max_se = 0;
  for (double s : est.std_error) max_se = std::max(max_se, s);
  log << "samples " << est.samples << " bins " << c.bins << " max_std_error " << format_double(max_se) << '\n';
}

inline void run_firsteig(const RunConfig& c, unsigned workers, std::ostream& log) {
  require_out(c);
  const auto samples = first_angle_samples(*c.group, c.count, c.seed, c.exclude_forced_zero, workers);
  const double thr = c.excision ? c.excision->threshold() : 0.0;
  std::vector<double> kept;
  for (const auto& s : samples)
    if (!std::isnan(s.angle) && s.char_poly >= thr) kept.push_back(s.angle);
  if (kept.empty()) throw DataError("firsteig: no samples survive");
  const auto norm = mean_normalize(kept);
  Histogram h = Histogram::uniform(0.0, c.hi > 0 ? c.hi : 4.0, c.bins, Histogram::Normalization::mean_one_density);
  for (double x : norm) h.add(x);
  OutputFile f(c.out);
  write_histogram_csv(f.stream(), h);
  f.close();
  log << "kept " << kept.size() << " of " << samples.size() << " threshold " << format_double(thr) << " overflow "
      << h.overflow() << '\n';
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) out.push_back(f);
  return out;
}

inline void run_excise(const RunConfig& c, std::ostream& log) {
  if (c.input.empty()) throw UsageError("excise: --input is required");
  std::ifstream is(c.input);
  if (!is) throw DataError("cannot open " + c.input);
  const double thr = c.excision->threshold();
  std::string header, line;
  if (!std::getline(is, header) || header.rfind("index,re_det,im_det,abs_det", 0) != 0)
    throw DataError(c.input + ": not a sample file");
  std::vector<std::string> kept;
  std::size_t total = 0, lineno = 1;
  double min_kept = std::numeric_limits<double>::infinity();
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() < 4) throw DataError(c.input + ": short row at line " + std::to_string(lineno));
    double mag;
    try {
      mag = std::stod(f[3]);
    } catch (const std::exception&) {
      throw DataError(c.input + ": bad abs_det at line " + std::to_string(lineno));
    }
    ++total;
    if (mag >= thr) {
      kept.push_back(line);
      min_kept = std::min(min_kept, mag);
    }
  }
  if (!c.out.empty()) {
    OutputFile f(c.out);
    f.stream() << header << '\n';
    for (const auto& k : kept) f.stream() << k << '\n';
    f.close();
  }
  log << "threshold " << format_double(thr) << '\n' << "kept " << kept.size() << " of " << total << '\n';
  if (!kept.empty()) log << "min_kept " << format_double(min_kept) << '\n';
}

inline void run_discriminants(const RunConfig& c, std::ostream& log) {
  const auto fam = enumerate_family(*c.family);
  if (!c.out.empty()) {
    OutputFile f(c.out);
    for (auto d : fam) f.stream() << d << '\n';
    f.close();
  }
  log << "count " << fam.size() << '\n' << "estimate " << format_double(cardinality_estimate(*c.family)) << '\n';
  if (c.family->symmetry == SymmetryCase::Generic)
    for (std::int64_t u = 1; u < c.family->M; ++u)
      log << "class " << u << " count " << count_in_residue_class(fam, c.family->M, u) << '\n';
}

inline CoefficientInputs load_coefficients(const RunConfig& c) {
  std::map<std::string, double> m;
  if (!c.coefficients.empty()) {
    std::ifstream is(c.coefficients);
    if (!is) throw DataError("cannot open " + c.coefficients);
    json j;
    try {
      j = json::parse(is);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(c.coefficients + ": invalid JSON: " + e.what());
    }
    m = coefficient_map_from_json(j, c.coefficients);
  }
  for (const auto& [k, v] : c.coefficient_values) m[k] = v;
  return coefficients_from_map(m);
}

inline void run_neff(const RunConfig& c, std::ostream& log) {
  CoefficientInputs in = load_coefficients(c);
  if (!in.k && c.family) in.k = c.family->k;
  const SymmetryCase sc = c.family ? c.family->symmetry : SymmetryCase::Generic;
  if (sc == SymmetryCase::Generic && c.l2) {
    if (!in.R || !in.mean_e1 || !in.mean_e2) throw UsageError("neff --l2 needs R, mean_e1, mean_e2");
    log << "n_eff " << format_double(n_eff_l2_optimize(*in.mean_e1, *in.mean_e2, *in.R)) << '\n';
    log << "closed_form " << format_double(n_eff_generic(*in.R, *in.mean_e1, *in.mean_e2)) << '\n';
    return;
  }
  const bool have = (sc == SymmetryCase::PrincipalEven && in.a1) || (sc == SymmetryCase::PrincipalOdd && in.a3) ||
                    (sc == SymmetryCase::SelfCM && in.b1) || sc == SymmetryCase::Generic;
  if (!have) in = coefficient_assembly(sc, in);
  if (sc != SymmetryCase::Generic && !c.family) throw UsageError("neff: a family (M, X) is required");
  const double M = c.family ? static_cast<double>(c.family->M) : 0, X = c.family ? static_cast<double>(c.family->X) : 0;
  log << "n_eff " << format_double(n_eff(sc, M, X, in)) << '\n';
  if (c.family) log << "n_std " << format_double(n_std(M, X)) << '\n';
}

inline void run_compare(const RunConfig& c, std::ostream& log) {
  if (c.zeros.empty() || c.ensemble.empty()) throw UsageError("compare: --zeros and --ensemble are required");
  const auto sel = parse_selector(c.selector);
  const auto z = lowest_zero_statistic(ingest_zero_list(c.zeros), sel, c.vanish_tol);
  const auto e = lowest_zero_statistic(ingest_zero_list(c.ensemble), sel, c.vanish_tol);
  const auto r = compare_report(z, e, c.bins, c.hi);
  if (!c.out.empty()) {
    OutputFile f(c.out);
    write_compare_csv(f.stream(), r);
    f.close();
  }
  if (!c.report.empty()) {
    auto j = report_json(r);
    j["selector"] = selector_name(sel);
    write_text(c.report, j.dump(2) + "\n");
  }
  log << "ks " << format_double(r.ks) << '\n' << "n_left " << r.n_left << '\n' << "n_right " << r.n_right << '\n';
}

}  // namespace detail

inline void execute(const RunConfig& c, unsigned workers, std::ostream& log) {
  validate(c);
  if (c.experiment == "sample") return detail::run_sample(c, workers, log);
  if (c.experiment == "onelevel") return detail::run_density(c, workers, log, false);
  if (c.experiment == "paircorr") return detail::run_density(c, workers, log, true);
  if (c.experiment == "firsteig") return detail::run_firsteig(c, workers, log);
  if (c.experiment == "excise") return detail::run_excise(c, log);
  if (c.experiment == "discriminants") return detail::run_discriminants(c, log);
  if (c.experiment == "neff") return detail::run_neff(c, log);
  if (c.experiment == "compare") return detail::run_compare(c, log);
}

// Exit codes: 0 success, 1 data error, 2 usage error.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Excised random-matrix ensembles and quadratic-twist families"};
  app.require_subcommand(0, 1);
  std::string config_path;
  unsigned threads = 0;
  bool print_config = false;
  app.add_option("--config", config_path, "Run the experiment described by a JSON config");
  app.add_option("--threads", threads, "Worker threads (default: EXRMT_THREADS or 1)")->check(CLI::PositiveNumber);
  app.add_flag("--print-config", print_config, "Print the resolved config as JSON and exit");

  RunConfig c;
  std::string group = "unitary", fcase = "generic", selector = "lowest";
  int n = 1;
  FamilySpec fam;
  ExcisionRule rule;
  std::vector<std::string> coeff_pairs;

  auto add_group = [&](CLI::App* s) {
    s->add_option("--group", group, "so_even | so_odd | usp | unitary")->required();
    s->add_option("--n", n, "Half size N")->required();
  };
  auto add_mc = [&](CLI::App* s) {
    s->add_option("--count", c.count, "Number of samples");
    s->add_option("--seed", c.seed, "Master seed");
  };
  auto add_family = [&](CLI::App* s, bool required) {
    auto* m = s->add_option("--M", fam.M, "Odd prime level");
    auto* x = s->add_option("--X", fam.X, "Discriminant bound");
    if (required) {
      m->required();
      x->required();
    }
    s->add_option("--case", fcase, "principal_even | principal_odd | self_cm | generic");
    s->add_option("--k", fam.k, "Weight");
    s->add_option("--epsilon", fam.epsilon_f, "Root number of f");
    s->add_option("--delta", fam.Delta, "Self-CM sign");
    s->add_flag("--negative", fam.negative, "Enumerate negative discriminants");
  };
  auto add_excision = [&](CLI::App* s, bool required) {
    auto* a = s->add_option("--c", rule.c, "Cutoff constant");
    auto* b = s->add_option("--nstd", rule.n_std, "Standard matrix size");
    s->add_option("--k", rule.k, "Weight");
    if (required) {
      a->required();
      b->required();
    }
  };

  auto* s_sample = app.add_subcommand("sample", "Sample matrices; write spectra and det(I-A)");
  add_group(s_sample);
  add_mc(s_sample);
  s_sample->add_option("--out", c.out, "Sample CSV")->required();
  s_sample->add_option("--zeros-out", c.zeros_out, "Also write nonnegative eigenangles as a zero list");
  s_sample->add_flag("--exclude-forced-zero", c.exclude_forced_zero, "Drop the SO(odd) structural zero");

  auto* s_one = app.add_subcommand("onelevel", "One-level density histogram");
  add_group(s_one);
  add_mc(s_one);
  s_one->add_option("--bins", c.bins, "Bin count");
  s_one->add_option("--out", c.out, "Histogram CSV")->required();

  auto* s_pair = app.add_subcommand("paircorr", "Pair-correlation histogram");
  add_group(s_pair);
  add_mc(s_pair);
  s_pair->add_option("--bins", c.bins, "Bin count");
  s_pair->add_option("--window", c.window, "Window in mean spacings");
  s_pair->add_option("--out", c.out, "Histogram CSV")->required();

  auto* s_first = app.add_subcommand("firsteig", "Mean-1 first-eigenangle histogram, optionally excised");
  add_group(s_first);
  add_mc(s_first);
  s_first->add_option("--bins", c.bins, "Bin count");
  s_first->add_option("--hi", c.hi, "Upper histogram edge (default 4)");
  s_first->add_flag("--exclude-forced-zero", c.exclude_forced_zero, "Drop the SO(odd) structural zero");
  add_excision(s_first, false);
  s_first->add_option("--out", c.out, "Histogram CSV")->required();

  auto* s_exc = app.add_subcommand("excise", "Filter a sample file by |det(I-A)| >= threshold");
  add_excision(s_exc, true);
  s_exc->add_option("--input", c.input, "Sample CSV from 'sample'")->required();
  s_exc->add_option("--out", c.out, "Kept rows");

  auto* s_disc = app.add_subcommand("discriminants", "Enumerate a twist family");
  add_family(s_disc, true);
  s_disc->add_option("--out", c.out, "One discriminant per line");

  auto* s_neff = app.add_subcommand("neff", "Effective matrix size");
  add_family(s_neff, false);
  s_neff->add_option("--coeffs", c.coefficients, "JSON file of coefficient inputs");
  s_neff->add_option("--set", coeff_pairs, "name=value coefficient input (repeatable)");
  s_neff->add_flag("--l2", c.l2, "Generic case: numerical L2 minimizer");

  auto* s_cmp = app.add_subcommand("compare", "Compare zero statistics with an ensemble");
  s_cmp->add_option("--zeros", c.zeros, "Zero list CSV")->required();
  s_cmp->add_option("--ensemble", c.ensemble, "Ensemble zero list CSV")->required();
  s_cmp->add_option("--selector", selector, "lowest | lowest_nonvanishing | second_lowest");
  s_cmp->add_option("--vanish-tol", c.vanish_tol, "Vanishing tolerance");
  s_cmp->add_option("--bins", c.bins, "Bin count");
  s_cmp->add_option("--hi", c.hi, "Upper histogram edge (default: sample max)");
  s_cmp->add_option("--out", c.out, "Overlaid histogram CSV");
  s_cmp->add_option("--report", c.report, "Report JSON");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  RunConfig resolved;
  try {
    RunConfig cfg;
    if (!config_path.empty()) {
      if (!app.get_subcommands().empty()) throw UsageError("--config cannot be combined with a subcommand");
      cfg = load_config(config_path);
    } else if (app.get_subcommands().empty()) {
      err << app.help();
      return 2;
    } else {
      auto* sub = app.get_subcommands().front();
      c.experiment = sub->get_name();
      if (sub == s_sample || sub == s_one || sub == s_pair || sub == s_first) c.group = GroupSpec{parse_group(group), n};
      if (sub == s_disc || (sub == s_neff && sub->count("--M") > 0)) {
        fam.symmetry = parse_case(fcase);
        c.family = fam;
      }
      if (sub == s_neff && sub->count("--M") == 0) {
        if (parse_case(fcase) != SymmetryCase::Generic) throw UsageError("neff: --M and --X required for this case");
      }
      if (sub == s_exc || (sub == s_first && sub->count("--c") > 0)) c.excision = rule;
      c.selector = selector;
      for (const auto& kv : coeff_pairs) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw UsageError("--set expects name=value, got '" + kv + "'");
        try {
          c.coefficient_values[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        } catch (const std::exception&) {
          throw UsageError("--set: bad number in '" + kv + "'");
        }
      }
      coefficients_from_map(c.coefficient_values);
      cfg = c;
    }
    if (threads > 0) cfg.threads = threads;
    validate(cfg);
    if (print_config) {
      out << serialize(cfg);
      return 0;
    }
    resolved = std::move(cfg);
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    execute(resolved, resolved.threads ? *resolved.threads : default_workers(), out);
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const MissingInput& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace exrmt
