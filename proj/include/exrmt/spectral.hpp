#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "exrmt/eigensolver.hpp"
#include "exrmt/haar.hpp"

namespace exrmt {

struct EigenangleSpectrum {
  GroupSpec spec;
  std::vector<double> angles;  // ascending, in (-pi, pi]
};

struct CharPolyValue {
  cplx value;
  double magnitude = 0;
};

inline constexpr double kModulusTol = 1e-6;

// Maps an angle to the canonical representative in (-pi, pi].
inline double canonical_angle(double t) {
  return t <= -std::numbers::pi ? std::numbers::pi : t;
}

inline std::vector<cplx> eigenvalues(const GroupMatrix& a) {
  const int n = a.spec.dimension();
  std::vector<cplx> buf(a.entries.data(), a.entries.data() + static_cast<std::size_t>(n) * n);
  return HessenbergQR{}.eigenvalues(std::move(buf), n);
}

// Pairs angles theta with -theta after sorting by |theta|, averaging magnitudes.
// For SOOdd the smallest |theta| is the structural +1 eigenvalue and is set to 0.
inline void symmetrize(std::vector<double>& th, Group g) {
  std::vector<std::size_t> idx(th.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](auto i, auto j) { return std::abs(th[i]) < std::abs(th[j]); });
  std::vector<double> out;
  out.reserve(th.size());
  std::size_t start = 0;
  if (g == Group::SOOdd) {
    out.push_back(0.0);
    start = 1;
  }
  if ((idx.size() - start) % 2 != 0) throw std::logic_error("symmetrize: odd number of paired angles");
  for (std::size_t k = start; k < idx.size(); k += 2) {
    const double m = 0.5 * (std::abs(th[idx[k]]) + std::abs(th[idx[k + 1]]));
    out.push_back(m);
    out.push_back(canonical_angle(-m));
  }
  th = std::move(out);
}

inline EigenangleSpectrum eigenangles(const GroupMatrix& a) {
  const auto lam = eigenvalues(a);
  EigenangleSpectrum s{a.spec, {}};
  s.angles.reserve(lam.size());
  for (const auto& l : lam) {
    const double m = std::abs(l);
    if (std::abs(m - 1.0) > kModulusTol)
      throw std::runtime_error("eigenvalue modulus " + std::to_string(m) + " deviates from 1 beyond tolerance");
    s.angles.push_back(canonical_angle(std::atan2(l.imag(), l.real())));
  }
  if (a.spec.symmetric_spectrum()) symmetrize(s.angles, a.spec.group);
  std::sort(s.angles.begin(), s.angles.end());
  return s;
}

// det(I - A) by LU with partial pivoting.
inline cplx det_i_minus_a(const GroupMatrix& a) {
  const int n = a.spec.dimension();
  if (a.spec.group == Group::SOEven || a.spec.group == Group::SOOdd) {
    const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) - a.entries.real();
    return Eigen::PartialPivLU<Eigen::MatrixXd>(m).determinant();
  }
  const Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n) - a.entries;
  return Eigen::PartialPivLU<Eigen::MatrixXcd>(m).determinant();
}

inline cplx spectrum_product_at_one(const EigenangleSpectrum& s) {
  cplx p = 1.0;
  for (double t : s.angles) p *= cplx(1.0 - std::cos(t), -std::sin(t));
  return p;
}

inline CharPolyValue char_poly_at_one_lu(const GroupMatrix& a) {
  const cplx v = det_i_minus_a(a);
  return {v, std::abs(v)};
}

inline CharPolyValue char_poly_at_one(const GroupMatrix& a, const EigenangleSpectrum& s) {
  const cplx lu = det_i_minus_a(a);
  const cplx pr = spectrum_product_at_one(s);
  const double gap = std::abs(lu - pr);
  // The absolute floor covers spectra with an exact +1 eigenvalue, where both routes are rounding noise.
  if (gap > 1e-6 * std::max(std::abs(lu), std::abs(pr)) + 1e-10)
    throw std::runtime_error("det(I-A) cross-check failed: LU " + std::to_string(std::abs(lu)) + " vs product " +
                             std::to_string(std::abs(pr)));
  return {lu, std::abs(lu)};
}

inline CharPolyValue char_poly_at_one(const GroupMatrix& a) { return char_poly_at_one(a, eigenangles(a)); }

inline std::optional<double> first_eigenangle(const EigenangleSpectrum& s, bool exclude_forced_zero) {
  std::vector<double> th = s.angles;
  if (exclude_forced_zero && s.spec.group == Group::SOOdd && !th.empty()) {
    const auto it = std::min_element(th.begin(), th.end(), [](double x, double y) { return std::abs(x) < std::abs(y); });
    th.erase(it);
  }
  std::optional<double> best;
  for (double t : th)
    if (t > 0 && (!best || t < *best)) best = t;
  return best;
}

struct ExcisionRule {
  double c = 0;
  int k = 2;
  double n_std = 0;

  void validate() const {
    if (!(c >= 0)) throw std::invalid_argument("ExcisionRule: c must be nonnegative");
    if (!std::isfinite(n_std)) throw std::invalid_argument("ExcisionRule: n_std must be finite");
  }
  double threshold() const { return c * std::exp((1.0 - k) * n_std / 2.0); }
  bool operator==(const ExcisionRule&) const = default;
};

template <class Payload>
struct ExcisionResult {
  std::vector<std::pair<CharPolyValue, Payload>> kept;
  std::size_t total = 0;
  double threshold = 0;
};

template <class Payload>
ExcisionResult<Payload> excise(const std::vector<std::pair<CharPolyValue, Payload>>& items, const ExcisionRule& rule) {
  rule.validate();
  ExcisionResult<Payload> r;
  r.threshold = rule.threshold();
  r.total = items.size();
  for (const auto& it : items)
    if (it.first.magnitude >= r.threshold) r.kept.push_back(it);
  return r;
}

}  // namespace exrmt
