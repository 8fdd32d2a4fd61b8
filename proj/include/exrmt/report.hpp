#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "exrmt/stats.hpp"

namespace exrmt {

struct CompareBin {
  double left = 0, right = 0;
  double left_density = 0, right_density = 0;
  double left_se = 0, right_se = 0;
  double residual = 0;  // left - right
};

struct CompareReport {
  double ks = 0;
  std::size_t n_left = 0, n_right = 0;
  std::vector<CompareBin> bins;
};

namespace detail {

inline void fill_density(const std::vector<double>& xs, const Histogram& proto, std::vector<double>& dens,
                         std::vector<double>& se) {
  Histogram h = proto;
  for (double x : xs) h.add(x);
  const double n = static_cast<double>(xs.size());
  dens.resize(h.bins());
  se.resize(h.bins());
  for (std::size_t i = 0; i < h.bins(); ++i) {
    const double p = static_cast<double>(h.counts()[i]) / n;
    dens[i] = p / h.width(i);
    se[i] = std::sqrt(p * (1 - p) / n) / h.width(i);
  }
}

}  // namespace detail

// Mean-1 normalizes both samples and overlays them on a common [0, hi] grid
// (hi = largest normalized value unless given). Densities are per sample, so
// mass beyond hi is not renormalized away.
inline CompareReport compare_report(const std::vector<double>& left, const std::vector<double>& right, std::size_t bins,
                                    double hi = 0) {
  if (left.empty() || right.empty()) throw std::invalid_argument("compare_report: empty sample");
  const auto a = mean_normalize(left), b = mean_normalize(right);
  if (!(hi > 0)) hi = std::max(*std::max_element(a.begin(), a.end()), *std::max_element(b.begin(), b.end()));
  const Histogram proto = Histogram::uniform(0.0, hi, bins, Histogram::Normalization::mean_one_density);
  CompareReport r;
  r.ks = ks_distance(a, b);
  r.n_left = a.size();
  r.n_right = b.size();
  std::vector<double> da, sa, db, sb;
  detail::fill_density(a, proto, da, sa);
  detail::fill_density(b, proto, db, sb);
  for (std::size_t i = 0; i < bins; ++i)
    r.bins.push_back({proto.edges()[i], proto.edges()[i + 1], da[i], db[i], sa[i], sb[i], da[i] - db[i]});
  return r;
}

inline nlohmann::ordered_json report_json(const CompareReport& r) {
  nlohmann::ordered_json j;
  j["ks"] = r.ks;
  j["n_left"] = r.n_left;
  j["n_right"] = r.n_right;
  j["normalization"] = "each sample divided by its own mean";
  auto arr = nlohmann::ordered_json::array();
  for (const auto& b : r.bins)
    arr.push_back({{"bin_left", b.left},
                   {"bin_right", b.right},
                   {"density_left", b.left_density},
                   {"density_right", b.right_density},
                   {"se_left", b.left_se},
                   {"se_right", b.right_se},
                   {"residual", b.residual}});
  j["bins"] = std::move(arr);
  return j;
}

inline void write_compare_csv(std::ostream& os, const CompareReport& r) {
  os << "bin_left,bin_right,density_left,density_right,residual\n";
  for (const auto& b : r.bins)
    os << format_double(b.left) << ',' << format_double(b.right) << ',' << format_double(b.left_density) << ','
       << format_double(b.right_density) << ',' << format_double(b.residual) << '\n';
}

}  // namespace exrmt
