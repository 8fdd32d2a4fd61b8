#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <iterator>
#include <stdexcept>
#include <string>

#include "exrmt/random.hpp"

namespace exrmt {

using cplx = std::complex<double>;

enum class Group { SOEven, SOOdd, USp, Unitary };

inline const char* group_name(Group g) {
  switch (g) {
    case Group::SOEven: return "so_even";
    case Group::SOOdd: return "so_odd";
    case Group::USp: return "usp";
    case Group::Unitary: return "unitary";
  }
  return "?";
}

inline Group parse_group(const std::string& s) {
  if (s == "so_even" || s == "soeven" || s == "so2n") return Group::SOEven;
  if (s == "so_odd" || s == "soodd" || s == "so2n+1") return Group::SOOdd;
  if (s == "usp" || s == "sp") return Group::USp;
  if (s == "unitary" || s == "u") return Group::Unitary;
  throw std::invalid_argument("unknown group '" + s + "'");
}

struct GroupSpec {
  Group group = Group::Unitary;
  int half_size = 1;  // N

  int dimension() const {
    switch (group) {
      case Group::SOEven:
      case Group::USp: return 2 * half_size;
      case Group::SOOdd: return 2 * half_size + 1;
      case Group::Unitary: return half_size;
    }
    return 0;
  }
  bool symmetric_spectrum() const { return group != Group::Unitary; }
  void validate() const {
    if (half_size < 1) throw std::invalid_argument("GroupSpec: N must be >= 1");
  }
  bool operator==(const GroupSpec&) const = default;
};

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t sample_index = 0;
};

struct GroupMatrix {
  GroupSpec spec;
  Eigen::MatrixXcd entries;
};

// A sampled matrix failed its group invariants: a defect, not a data error.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct InvariantReport {
  double unitarity = 0;   // max |A A^* - I|
  double determinant = 0; // |det A - 1| for SO groups
  double symplectic = 0;  // max |A^T J A - J| for USp
  double imaginary = 0;   // max |Im a_ij| for SO groups

  bool ok() const;
};

inline constexpr double kUnitarityTol = 1e-10;
inline constexpr double kDeterminantTol = 1e-8;
inline constexpr double kSymplecticTol = 1e-10;

// Standard skew form with blocks [[0, I_N], [-I_N, 0]].
inline Eigen::MatrixXcd symplectic_form(int n_half) {
  Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(2 * n_half, 2 * n_half);
  for (int i = 0; i < n_half; ++i) {
    J(i, n_half + i) = 1.0;
    J(n_half + i, i) = -1.0;
  }
  return J;
}

inline bool InvariantReport::ok() const {
  return unitarity <= kUnitarityTol && determinant <= kDeterminantTol && symplectic <= kSymplecticTol &&
         imaginary == 0.0;
}

inline InvariantReport check_invariants(const GroupMatrix& a) {
  InvariantReport rep;
  const auto& A = a.entries;
  const int n = a.spec.dimension();
  if (A.rows() != n || A.cols() != n) throw InvariantViolation("matrix dimension does not match group spec");
  rep.unitarity = (A * A.adjoint() - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (a.spec.group == Group::SOEven || a.spec.group == Group::SOOdd) {
    rep.imaginary = A.imag().cwiseAbs().maxCoeff();
    rep.determinant = std::abs(A.real().determinant() - 1.0);
  }
  if (a.spec.group == Group::USp) {
    const auto J = symplectic_form(a.spec.half_size);
    rep.symplectic = (A.transpose() * J * A - J).cwiseAbs().maxCoeff();
  }
  return rep;
}

inline void verify_invariants(const GroupMatrix& a) {
  const auto rep = check_invariants(a);
  if (!rep.ok()) {
    throw InvariantViolation(std::string("group invariant violated for ") + group_name(a.spec.group) +
                             " N=" + std::to_string(a.spec.half_size) +
                             ": unitarity=" + std::to_string(rep.unitarity) +
                             " det=" + std::to_string(rep.determinant) +
                             " symplectic=" + std::to_string(rep.symplectic));
  }
}

namespace detail {

inline Eigen::MatrixXcd haar_unitary(int n, GaussianStream& g) {
  Eigen::MatrixXcd Z(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double re = g.next();
      const double im = g.next();
      Z(i, j) = cplx(re, im);
    }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Z);
  Eigen::MatrixXcd Q = qr.householderQ();
  const auto& R = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const cplx r = R(j, j);
    const double m = std::abs(r);
    if (m > 0) Q.col(j) *= r / m;
  }
  return Q;
}

inline Eigen::MatrixXd haar_special_orthogonal(int n, GaussianStream& g) {
  Eigen::MatrixXd Z(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) Z(i, j) = g.next();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Z);
  Eigen::MatrixXd Q = qr.householderQ();
  const auto& R = qr.matrixQR();
  for (int j = 0; j < n; ++j)
    if (R(j, j) < 0) Q.col(j) = -Q.col(j);
  if (Q.determinant() < 0) Q.col(n - 1) = -Q.col(n - 1);
  return Q;
}

// Quaternionic Ginibre matrix, each quaternion a + b j stored as the block
// [[a, b], [-conj(b), conj(a)]], orthonormalized by block Gram-Schmidt
// (two passes) so the quaternionic R factor has positive real diagonal.
inline Eigen::MatrixXcd haar_symplectic(int n_half, GaussianStream& g) {
  const int n = 2 * n_half;
  Eigen::MatrixXcd Z(n, n);
  for (int bj = 0; bj < n_half; ++bj)
    for (int bi = 0; bi < n_half; ++bi) {
      const double ar = g.next(), ai = g.next(), br = g.next(), bi_ = g.next();
      const cplx a(ar, ai), b(br, bi_);
      Z(2 * bi, 2 * bj) = a;
      Z(2 * bi, 2 * bj + 1) = b;
      Z(2 * bi + 1, 2 * bj) = -std::conj(b);
      Z(2 * bi + 1, 2 * bj + 1) = std::conj(a);
    }
  for (int bj = 0; bj < n_half; ++bj) {
    auto V = Z.middleCols(2 * bj, 2);
    for (int pass = 0; pass < 2; ++pass)
      for (int bk = 0; bk < bj; ++bk) {
        const auto U = Z.middleCols(2 * bk, 2);
        const Eigen::Matrix2cd c = U.adjoint() * V;
        V -= U * c;
      }
    // V^* V is a real multiple of I_2 for quaternionic columns.
    const double norm = std::sqrt(V.col(0).squaredNorm());
    V /= norm;
  }
  // Interleaved pairs (2i, 2i+1) -> (i, N+i) to reach the [[0, I],[-I, 0]] form.
  Eigen::MatrixXcd out(n, n);
  auto idx = [n_half](int k) { return (k % 2 == 0) ? k / 2 : n_half + k / 2; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) out(idx(i), idx(j)) = Z(i, j);
  return out;
}

}  // namespace detail

// Haar sample without the invariant check; for hot loops whose callers verify separately.
inline GroupMatrix sample_unverified(const GroupSpec& spec, const SeedSpec& seed) {
  spec.validate();
  GaussianStream g(seed.master_seed, seed.sample_index);
  GroupMatrix out{spec, {}};
  switch (spec.group) {
    case Group::Unitary: out.entries = detail::haar_unitary(spec.half_size, g); break;
    case Group::SOEven:
    case Group::SOOdd: out.entries = detail::haar_special_orthogonal(spec.dimension(), g).cast<cplx>(); break;
    case Group::USp: out.entries = detail::haar_symplectic(spec.half_size, g); break;
  }
  return out;
}

inline GroupMatrix sample(const GroupSpec& spec, const SeedSpec& seed) {
  GroupMatrix out = sample_unverified(spec, seed);
  verify_invariants(out);
  return out;
}

// Lazy view of sample(spec, {master_seed, i}) for i in [0, count).
class SampleStream {
 public:
  SampleStream(GroupSpec spec, std::uint64_t master_seed, std::uint64_t count)
      : spec_(spec), seed_(master_seed), count_(count) {
    spec.validate();
    if (count < 1) throw std::invalid_argument("sample_stream: count must be >= 1");
  }

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = GroupMatrix;
    using difference_type = std::ptrdiff_t;
    using pointer = void;
    using reference = GroupMatrix;

    iterator(const SampleStream* s, std::uint64_t i) : s_(s), i_(i) {}
    GroupMatrix operator*() const { return sample(s_->spec_, {s_->seed_, i_}); }
    iterator& operator++() {
      ++i_;
      return *this;
    }
    iterator operator++(int) {
      auto t = *this;
      ++i_;
      return t;
    }
    bool operator==(const iterator& o) const { return i_ == o.i_; }

   private:
    const SampleStream* s_;
    std::uint64_t i_;
  };

  iterator begin() const { return {this, 0}; }
  iterator end() const { return {this, count_}; }
  std::uint64_t size() const { return count_; }
  GroupMatrix operator[](std::uint64_t i) const { return sample(spec_, {seed_, i}); }

 private:
  GroupSpec spec_;
  std::uint64_t seed_;
  std::uint64_t count_;
};

inline SampleStream sample_stream(const GroupSpec& spec, std::uint64_t master_seed, std::uint64_t count) {
  return SampleStream(spec, master_seed, count);
}

}  // namespace exrmt
