#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "exrmt/sieve.hpp"
#include "exrmt/theory.hpp"

namespace exrmt {

inline bool is_squarefree(std::int64_t n) {
  n = n < 0 ? -n : n;
  if (n == 0) return false;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % (p * p) == 0) return false;
    if (n % p == 0) n /= p;
  }
  return true;
}

inline std::int64_t mod_pos(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline bool is_fundamental_discriminant(std::int64_t d) {
  if (d == 0) return false;
  const auto r = mod_pos(d, 4);
  if (r == 1) return is_squarefree(d);
  if (r == 0) {
    const std::int64_t m = d / 4;
    const auto s = mod_pos(m, 4);
    return (s == 2 || s == 3) && is_squarefree(m);
  }
  return false;
}

// Kronecker symbol (a/n), Cohen, Algorithm 1.4.10.
inline int kronecker(std::int64_t a, std::int64_t n) {
  static constexpr int tab2[8] = {0, 1, 0, -1, 0, -1, 0, 1};
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  if (a % 2 == 0 && n % 2 == 0) return 0;
  int v = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++v;
  }
  int k = (v % 2 == 0) ? 1 : tab2[a & 7];
  if (n < 0) {
    n = -n;
    if (a < 0) k = -k;
  }
  while (true) {
    if (a == 0) return n > 1 ? 0 : k;
    v = 0;
    while (a % 2 == 0) {
      a /= 2;
      ++v;
    }
    if (v % 2 == 1) k *= tab2[n & 7];
    if (a & n & 2) k = -k;
    const std::int64_t r = a < 0 ? -a : a;
    a = n % r;
    n = r;
  }
}

struct FamilySpec {
  std::int64_t M = 11;
  int k = 2;
  SymmetryCase symmetry = SymmetryCase::PrincipalEven;
  int epsilon_f = 1;
  int Delta = 1;  // SelfCM only
  std::int64_t X = 1000;
  bool negative = false;  // enumerate -X <= d < 0 instead

  bool operator==(const FamilySpec&) const = default;

  void validate() const {
    if (M < 3 || M % 2 == 0 || !is_prime(static_cast<std::uint64_t>(M)))
      throw std::invalid_argument("FamilySpec: M must be an odd prime");
    if (k < 2) throw std::invalid_argument("FamilySpec: k must be >= 2");
    if (epsilon_f != 1 && epsilon_f != -1) throw std::invalid_argument("FamilySpec: epsilon_f must be +1 or -1");
    if (Delta != 1 && Delta != -1) throw std::invalid_argument("FamilySpec: Delta must be +1 or -1");
    if (X < 3) throw std::invalid_argument("FamilySpec: X must be >= 3");
  }
};

// psi_d(-M), the Kronecker symbol (d / -M); equals (d/M) for d > 0.
inline int psi_d_minus_M(std::int64_t d, std::int64_t M) { return kronecker(d, -M); }

inline bool family_condition(const FamilySpec& s, std::int64_t d) {
  const int psi = psi_d_minus_M(d, s.M);
  switch (s.symmetry) {
    case SymmetryCase::PrincipalEven: return psi * s.epsilon_f == 1;
    case SymmetryCase::PrincipalOdd: return psi * s.epsilon_f == -1;
    case SymmetryCase::SelfCM: return psi == s.Delta && std::gcd(d, s.M) == 1;
    case SymmetryCase::Generic: return true;
  }
  return false;
}

// Sorted members of the family (d = +-1 excluded as the untwisted form).
inline std::vector<std::int64_t> enumerate_family(const FamilySpec& s) {
  s.validate();
  const auto sf = squarefree_table(static_cast<std::uint64_t>(s.X));
  auto fundamental = [&](std::int64_t d) {
    const std::int64_t a = d < 0 ? -d : d;
    const auto r = mod_pos(d, 4);
    if (r == 1) return sf[static_cast<std::size_t>(a)] != 0;
    if (r == 0) {
      const auto m4 = mod_pos(d / 4, 4);
      return (m4 == 2 || m4 == 3) && sf[static_cast<std::size_t>(a / 4)] != 0;
    }
    return false;
  };
  std::vector<std::int64_t> out;
  if (s.negative) {
    for (std::int64_t d = -s.X; d <= -2; ++d)
      if (fundamental(d) && family_condition(s, d)) out.push_back(d);
  } else {
    for (std::int64_t d = 2; d <= s.X; ++d)
      if (fundamental(d) && family_condition(s, d)) out.push_back(d);
  }
  return out;
}

inline std::size_t count_in_residue_class(const std::vector<std::int64_t>& family, std::int64_t M, std::int64_t U) {
  std::size_t n = 0;
  for (auto d : family)
    if (mod_pos(d, M) == mod_pos(U, M)) ++n;
  return n;
}

// Self-dual cases count the whole family; the generic value counts one residue class d = U (mod M).
inline double cardinality_estimate(const FamilySpec& s) {
  const double M = static_cast<double>(s.M), X = static_cast<double>(s.X), pi2 = std::numbers::pi * std::numbers::pi;
  if (s.symmetry == SymmetryCase::Generic) return 3 * M * X / (pi2 * (M * M - 1));
  return 3 * M * X / (2 * pi2 * (M + 1));
}

struct RootNumber {
  cplx value;
  std::optional<int> reciprocity_sign;  // SelfCM: (-1)^{(D'-1)(d'-1)/4} eps_f
};

inline std::int64_t odd_part(std::int64_t n) {
  while (n != 0 && n % 2 == 0) n /= 2;
  return n;
}

inline RootNumber twisted_root_number(const FamilySpec& s, std::int64_t d, cplx chi_f_of_d) {
  if (std::gcd(d, s.M) != 1) throw std::invalid_argument("twisted_root_number: gcd(d, M) must be 1");
  RootNumber r{chi_f_of_d * static_cast<double>(psi_d_minus_M(d, s.M)) * static_cast<double>(s.epsilon_f), {}};
  if (s.symmetry == SymmetryCase::SelfCM) {
    const std::int64_t Dp = odd_part(-s.M), dp = odd_part(d);
    const std::int64_t e = ((Dp - 1) * (dp - 1)) / 4;
    r.reciprocity_sign = (mod_pos(e, 2) == 0 ? 1 : -1) * s.epsilon_f;
  }
  return r;
}

// chi_f(d) for a self-CM form of prime level M = -D: the quadratic character (D / d).
inline int self_cm_character(std::int64_t M, std::int64_t d) { return kronecker(-M, d); }

struct SumCheck {
  double direct = 0;
  double closed = 0;
  double gap = 0;
  std::size_t size = 0;
};

inline SumCheck sum_log_family(const FamilySpec& s, const std::vector<std::int64_t>& family) {
  const double c = std::sqrt(static_cast<double>(s.M)) / (2 * std::numbers::pi);
  SumCheck r;
  r.size = family.size();
  for (auto d : family) r.direct += std::log(c * static_cast<double>(d < 0 ? -d : d));
  r.closed = static_cast<double>(family.size()) * (std::log(c * static_cast<double>(s.X)) - 1);
  r.gap = std::abs(r.direct - r.closed);
  return r;
}

inline SumCheck sum_log_family(const FamilySpec& s) { return sum_log_family(s, enumerate_family(s)); }

struct OscillatorySumCheck {
  cplx direct;
  cplx closed;
  double gap = 0;
  std::size_t size = 0;
};

inline OscillatorySumCheck oscillatory_family_sum(const FamilySpec& s, const std::vector<std::int64_t>& family,
                                                  double tau, double R) {
  if (!(R > 0)) throw std::invalid_argument("oscillatory_family_sum: R must be positive");
  const double c = std::sqrt(static_cast<double>(s.M)) / (2 * std::numbers::pi);
  const double u = 2 * std::numbers::pi * tau / R;
  OscillatorySumCheck r;
  r.size = family.size();
  for (auto d : family) {
    const double ph = -u * std::log(c * static_cast<double>(d < 0 ? -d : d));
    r.direct += cplx(std::cos(ph), std::sin(ph));
  }
  const cplx I(0, 1);
  r.closed = static_cast<double>(family.size()) * std::exp(-2 * std::numbers::pi * I * tau - I * u) / (1.0 - I * u);
  r.gap = std::abs(r.direct - r.closed);
  return r;
}

inline OscillatorySumCheck oscillatory_family_sum(const FamilySpec& s, double tau, double R) {
  return oscillatory_family_sum(s, enumerate_family(s), tau, R);
}

// R = log(sqrt(M) X / (2 pi e)), the scale of the family's one-level density.
inline double family_scale(double M, double X) { return std::log(std::sqrt(M) * X / (2 * std::numbers::pi)) - 1; }

// psi_d(M) implied by the family condition for d > 0 (not defined for Generic, where it varies with d).
inline int level_character_value(const FamilySpec& s) {
  switch (s.symmetry) {
    case SymmetryCase::PrincipalEven: return s.epsilon_f;
    case SymmetryCase::PrincipalOdd: return -s.epsilon_f;
    case SymmetryCase::SelfCM: return s.Delta;
    case SymmetryCase::Generic: break;
  }
  throw std::invalid_argument("level_character_value: generic families need psi_d(M) per discriminant");
}

}  // namespace exrmt
