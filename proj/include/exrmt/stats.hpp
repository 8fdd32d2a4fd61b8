#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace exrmt {

struct Accumulator {
  std::uint64_t count = 0;
  double sum = 0;
  double sum_sq = 0;
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();

  void add(double x) {
    ++count;
    sum += x;
    sum_sq += x * x;
    min = std::min(min, x);
    max = std::max(max, x);
  }
  void merge(const Accumulator& o) {
    count += o.count;
    sum += o.sum;
    sum_sq += o.sum_sq;
    min = std::min(min, o.min);
    max = std::max(max, o.max);
  }
  double mean() const { return count ? sum / static_cast<double>(count) : std::numeric_limits<double>::quiet_NaN(); }
  double variance() const {
    if (count < 2) return 0;
    const double n = static_cast<double>(count);
    return std::max(0.0, (sum_sq - sum * sum / n) / (n - 1));
  }
  double std_error() const { return count ? std::sqrt(variance() / static_cast<double>(count)) : 0; }
};

class Histogram {
 public:
  enum class Normalization { raw, density, mean_one_density };

  explicit Histogram(std::vector<double> edges, Normalization norm = Normalization::density)
      : edges_(std::move(edges)), counts_(edges_.size() > 0 ? edges_.size() - 1 : 0, 0), norm_(norm) {
    if (edges_.size() < 2) throw std::invalid_argument("Histogram: need at least one bin");
    for (std::size_t i = 1; i < edges_.size(); ++i)
      if (!(edges_[i] > edges_[i - 1])) throw std::invalid_argument("Histogram: edges must be strictly increasing");
  }

  static Histogram uniform(double lo, double hi, std::size_t bins, Normalization norm = Normalization::density) {
    if (bins < 1 || !(hi > lo)) throw std::invalid_argument("Histogram: invalid uniform range");
    std::vector<double> e(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i) e[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
    e[bins] = hi;
    return Histogram(std::move(e), norm);
  }

  // Bins are [e_i, e_{i+1}) except the last, which also holds its right edge.
  std::ptrdiff_t bin_of(double x) const {
    if (x < edges_.front() || x > edges_.back() || std::isnan(x)) return -1;
    if (x == edges_.back()) return static_cast<std::ptrdiff_t>(counts_.size()) - 1;
    const auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
    return static_cast<std::ptrdiff_t>(it - edges_.begin()) - 1;
  }

  void add(double x, std::uint64_t weight = 1) {
    if (x < edges_.front()) {
      underflow_ += weight;
    } else if (x > edges_.back() || std::isnan(x)) {
      overflow_ += weight;
    } else {
      counts_[static_cast<std::size_t>(bin_of(x))] += weight;
    }
  }

  void merge(const Histogram& o) {
    if (o.edges_ != edges_) throw std::invalid_argument("Histogram::merge: edge mismatch");
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += o.counts_[i];
    underflow_ += o.underflow_;
    overflow_ += o.overflow_;
  }

  std::uint64_t in_range() const {
    std::uint64_t t = 0;
    for (auto c : counts_) t += c;
    return t;
  }

  std::vector<double> density() const {
    std::vector<double> d(counts_.size());
    if (norm_ == Normalization::raw) {
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = static_cast<double>(counts_[i]);
      return d;
    }
    const double tot = static_cast<double>(in_range());
    for (std::size_t i = 0; i < d.size(); ++i)
      d[i] = tot > 0 ? static_cast<double>(counts_[i]) / (tot * width(i)) : 0.0;
    return d;
  }

  double width(std::size_t i) const { return edges_[i + 1] - edges_[i]; }
  std::size_t bins() const { return counts_.size(); }
  const std::vector<double>& edges() const { return edges_; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  std::uint64_t underflow() const { return underflow_; }
  std::uint64_t overflow() const { return overflow_; }
  Normalization normalization() const { return norm_; }
  void set_normalization(Normalization n) { norm_ = n; }

 private:
  std::vector<double> edges_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t underflow_ = 0;
  std::uint64_t overflow_ = 0;
  Normalization norm_;
};

inline std::vector<double> mean_normalize(const std::vector<double>& samples) {
  if (samples.empty()) throw std::invalid_argument("mean_normalize: empty input");
  double s = 0;
  for (double x : samples) s += x;
  const double mean = s / static_cast<double>(samples.size());
  if (!(mean > 0)) throw std::invalid_argument("mean_normalize: mean must be positive");
  std::vector<double> out(samples.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = samples[i] / mean;
  return out;
}

// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_distance: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

// One-sample statistic against a continuous CDF.
inline double ks_distance(std::vector<double> a, const std::function<double(double)>& cdf) {
  if (a.empty()) throw std::invalid_argument("ks_distance: empty sample");
  std::sort(a.begin(), a.end());
  const double n = static_cast<double>(a.size());
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double f = cdf(a[i]);
    d = std::max({d, std::abs(static_cast<double>(i + 1) / n - f), std::abs(f - static_cast<double>(i) / n)});
  }
  return d;
}

// Linear-interpolated empirical quantile, q in [0, 1].
inline double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw std::invalid_argument("quantile: empty input");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_histogram_csv(std::ostream& os, const std::vector<double>& edges, const std::vector<double>& density) {
  if (edges.size() != density.size() + 1) throw std::invalid_argument("write_histogram_csv: size mismatch");
  os << "bin_left,bin_right,density\n";
  for (std::size_t i = 0; i < density.size(); ++i)
    os << format_double(edges[i]) << ',' << format_double(edges[i + 1]) << ',' << format_double(density[i]) << '\n';
}

inline void write_histogram_csv(std::ostream& os, const Histogram& h) { write_histogram_csv(os, h.edges(), h.density()); }

}  // namespace exrmt
