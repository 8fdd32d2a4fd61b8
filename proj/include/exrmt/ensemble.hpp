#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include "exrmt/haar.hpp"
#include "exrmt/parallel.hpp"
#include "exrmt/spectral.hpp"
#include "exrmt/stats.hpp"

namespace exrmt {

// Per-matrix density estimate: density[i] = E[# points in bin i] / width_i with
// its Monte Carlo standard error from per-matrix bin counts.
struct DensityEstimate {
  Histogram hist;
  std::vector<double> density;
  std::vector<double> std_error;
  std::uint64_t samples = 0;
};

// Evaluates fn(matrix, spectrum) for each sample index; slot i holds sample i.
template <class T, class Fn>
std::vector<T> map_spectra(const GroupSpec& spec, std::uint64_t count, std::uint64_t seed, unsigned workers, Fn fn) {
  std::vector<T> out(count);
  parallel_for(count, workers, [&](std::uint64_t i) {
    const GroupMatrix a = sample(spec, {seed, i});
    out[i] = fn(a, eigenangles(a));
  });
  return out;
}

namespace detail {

// Accumulates per-matrix bin counts (and their squares) with exact integer merges.
template <class PointsFn>
DensityEstimate per_matrix_density(const GroupSpec& spec, std::uint64_t count, std::uint64_t seed, double lo, double hi,
                                   std::size_t bins, double per_point_weight, unsigned workers, PointsFn points) {
  const Histogram proto = Histogram::uniform(lo, hi, bins);
  struct Shard {
    std::vector<std::uint64_t> sum, sum_sq;
  };
  std::vector<Shard> shards(std::max(1u, workers));
  for (auto& s : shards) {
    s.sum.assign(bins, 0);
    s.sum_sq.assign(bins, 0);
  }
  parallel_shards(count, workers, [&](std::uint64_t b, std::uint64_t e, unsigned w) {
    std::vector<std::uint64_t> local(bins);
    std::vector<double> pts;
    for (std::uint64_t i = b; i < e; ++i) {
      const GroupMatrix a = sample(spec, {seed, i});
      pts.clear();
      points(eigenangles(a), pts);
      std::fill(local.begin(), local.end(), 0);
      for (double x : pts) {
        const auto k = proto.bin_of(x);
        if (k >= 0) ++local[static_cast<std::size_t>(k)];
      }
      for (std::size_t k = 0; k < bins; ++k) {
        shards[w].sum[k] += local[k];
        shards[w].sum_sq[k] += local[k] * local[k];
      }
    }
  });
  DensityEstimate est{proto, std::vector<double>(bins), std::vector<double>(bins), count};
  std::vector<std::uint64_t> sum(bins, 0), sum_sq(bins, 0);
  for (const auto& s : shards)
    for (std::size_t k = 0; k < bins; ++k) {
      sum[k] += s.sum[k];
      sum_sq[k] += s.sum_sq[k];
    }
  Histogram h = proto;
  const double n = static_cast<double>(count);
  for (std::size_t k = 0; k < bins; ++k) {
    h.add(0.5 * (proto.edges()[k] + proto.edges()[k + 1]), sum[k]);
    const double w = proto.width(k);
    const double mean = static_cast<double>(sum[k]) / n;
    const double var = count > 1 ? std::max(0.0, (static_cast<double>(sum_sq[k]) - n * mean * mean) / (n - 1)) : 0.0;
    est.density[k] = mean / (w * per_point_weight);
    est.std_error[k] = std::sqrt(var / n) / (w * per_point_weight);
  }
  est.hist = std::move(h);
  return est;
}

}  // namespace detail

// Range of the one-level density kernel: [0, pi] for SOEven/USp, [0, 2pi] otherwise.
inline double one_level_range(Group g) {
  return (g == Group::SOEven || g == Group::USp) ? std::numbers::pi : 2 * std::numbers::pi;
}

// Eigenangle density per matrix per radian. The SOOdd structural zero is not counted.
inline DensityEstimate one_level_density_mc(const GroupSpec& spec, std::uint64_t count, std::uint64_t seed,
                                            std::size_t bins = 100, unsigned workers = 1) {
  if (count < 1) throw std::invalid_argument("one_level_density_mc: count must be >= 1");
  const double hi = one_level_range(spec.group);
  const bool full_circle = hi > 4;
  return detail::per_matrix_density(spec, count, seed, 0.0, hi, bins, 1.0, workers,
                                    [&](const EigenangleSpectrum& s, std::vector<double>& pts) {
                                      bool skipped_zero = spec.group != Group::SOOdd;
                                      for (double t : s.angles) {
                                        if (!skipped_zero && t == 0.0) {
                                          skipped_zero = true;
                                          continue;
                                        }
                                        if (full_circle)
                                          pts.push_back(t < 0 ? t + 2 * std::numbers::pi : t);
                                        else if (t >= 0)
                                          pts.push_back(t);
                                      }
                                    });
}

// Density of scaled differences ((theta_i - theta_j) mod 2pi) * dim / (2pi) over
// ordered pairs i != j, per matrix per eigenangle; tends to 1 - sinc^2 for U(N).
inline DensityEstimate pair_correlation_mc(const GroupSpec& spec, std::uint64_t count, std::uint64_t seed,
                                           double window = 5.0, std::size_t bins = 100, unsigned workers = 1) {
  if (count < 1) throw std::invalid_argument("pair_correlation_mc: count must be >= 1");
  if (!(window > 0)) throw std::invalid_argument("pair_correlation_mc: window must be positive");
  const double dim = spec.dimension();
  return detail::per_matrix_density(spec, count, seed, 0.0, window, bins, dim, workers,
                                    [&](const EigenangleSpectrum& s, std::vector<double>& pts) {
                                      const auto& th = s.angles;
                                      for (std::size_t i = 0; i < th.size(); ++i)
                                        for (std::size_t j = 0; j < th.size(); ++j) {
                                          if (i == j) continue;
                                          double d = std::fmod(th[i] - th[j], 2 * std::numbers::pi);
                                          if (d < 0) d += 2 * std::numbers::pi;
                                          const double x = d * dim / (2 * std::numbers::pi);
                                          if (x > 0 && x <= window) pts.push_back(x);
                                        }
                                    });
}

struct SpacingResult {
  Histogram hist;
  std::vector<double> spacings;  // mean-1 normalized
};

// Consecutive gaps of the sorted positive angles of each spectrum, pooled and scaled to unit mean.
inline SpacingResult nearest_neighbor_spacings(const std::vector<EigenangleSpectrum>& spectra, std::size_t bins = 100,
                                               double hi = 4.0) {
  std::vector<double> gaps;
  for (const auto& s : spectra) {
    std::vector<double> pos;
    for (double t : s.angles)
      if (t > 0) pos.push_back(t);
    std::sort(pos.begin(), pos.end());
    for (std::size_t i = 1; i < pos.size(); ++i) gaps.push_back(pos[i] - pos[i - 1]);
  }
  SpacingResult r{Histogram::uniform(0.0, hi, bins, Histogram::Normalization::mean_one_density), {}};
  if (gaps.empty()) return r;
  r.spacings = mean_normalize(gaps);
  for (double g : r.spacings) r.hist.add(g);
  return r;
}

struct FirstAngleSample {
  double angle = 0;       // NaN when the spectrum has no positive angle
  double char_poly = 0;   // |det(I - A)|
};

// First eigenangle and |Lambda_A(1)| of each sample, indexed by sample.
inline std::vector<FirstAngleSample> first_angle_samples(const GroupSpec& spec, std::uint64_t count, std::uint64_t seed,
                                                         bool exclude_forced_zero, unsigned workers = 1) {
  return map_spectra<FirstAngleSample>(spec, count, seed, workers,
                                       [&](const GroupMatrix& a, const EigenangleSpectrum& s) {
                                         const auto f = first_eigenangle(s, exclude_forced_zero);
                                         return FirstAngleSample{f ? *f : std::numeric_limits<double>::quiet_NaN(),
                                                                 char_poly_at_one(a, s).magnitude};
                                       });
}

// |det(I - A)| by LU only; no eigen-decomposition.
inline std::vector<double> char_poly_magnitudes(const GroupSpec& spec, std::uint64_t count, std::uint64_t seed,
                                                unsigned workers = 1) {
  std::vector<double> out(count);
  parallel_for(count, workers, [&](std::uint64_t i) { out[i] = char_poly_at_one_lu(sample(spec, {seed, i})).magnitude; });
  return out;
}

}  // namespace exrmt
