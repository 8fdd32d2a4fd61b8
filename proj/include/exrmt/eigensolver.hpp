#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace exrmt {

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Eigenvalues of a dense complex matrix: Householder reduction to upper
// Hessenberg form, then single-shift QR with Givens rotations restricted to
// the active window. Storage is column-major, a[i + j*n].
class HessenbergQR {
 public:
  using cplx = std::complex<double>;

  double deflation_tol = 1e-12;
  int iterations_per_eigenvalue = 30;

  std::vector<cplx> eigenvalues(std::vector<cplx> a, int n) const {
    if (static_cast<int>(a.size()) != n * n) throw std::invalid_argument("HessenbergQR: size mismatch");
    reduce_to_hessenberg(a, n);
    return qr_iterate(a, n);
  }

  static void reduce_to_hessenberg(std::vector<cplx>& a, int n) {
    std::vector<cplx> v(n);
    for (int k = 0; k + 2 < n; ++k) {
      double xnorm2 = 0;
      for (int i = k + 1; i < n; ++i) xnorm2 += std::norm(a[i + k * n]);
      const double xnorm = std::sqrt(xnorm2);
      if (xnorm == 0) continue;
      const cplx x0 = a[(k + 1) + k * n];
      const double ax0 = std::abs(x0);
      const cplx phase = ax0 > 0 ? x0 / ax0 : cplx(1, 0);
      // v = x + phase*|x| e1, H = I - 2 v v^* / (v^* v)
      for (int i = k + 1; i < n; ++i) v[i] = a[i + k * n];
      v[k + 1] += phase * xnorm;
      double vnorm2 = 0;
      for (int i = k + 1; i < n; ++i) vnorm2 += std::norm(v[i]);
      const double beta = 2.0 / vnorm2;
      // Left: rows k+1..n-1, columns k..n-1.
      for (int j = k; j < n; ++j) {
        cplx s = 0;
        for (int i = k + 1; i < n; ++i) s += std::conj(v[i]) * a[i + j * n];
        s *= beta;
        for (int i = k + 1; i < n; ++i) a[i + j * n] -= v[i] * s;
      }
      // Right: all rows, columns k+1..n-1.
      for (int i = 0; i < n; ++i) {
        cplx s = 0;
        for (int j = k + 1; j < n; ++j) s += a[i + j * n] * v[j];
        s *= beta;
        for (int j = k + 1; j < n; ++j) a[i + j * n] -= s * std::conj(v[j]);
      }
      for (int i = k + 2; i < n; ++i) a[i + k * n] = 0;
    }
  }

 private:
  std::vector<cplx> qr_iterate(std::vector<cplx>& h, int n) const {
    auto H = [&](int i, int j) -> cplx& { return h[i + j * n]; };
    std::vector<cplx> eig(n);
    std::vector<double> gc(n);
    std::vector<cplx> gs(n);
    int hi = n - 1;
    int iter = 0;
    while (hi >= 0) {
      int lo = hi;
      while (lo > 0) {
        const double scale = std::max(std::abs(H(lo, lo)) + std::abs(H(lo - 1, lo - 1)), 1.0);
        if (std::abs(H(lo, lo - 1)) <= deflation_tol * scale) {
          H(lo, lo - 1) = 0;
          break;
        }
        --lo;
      }
      if (lo == hi) {
        eig[hi] = H(hi, hi);
        --hi;
        iter = 0;
        continue;
      }
      if (++iter > iterations_per_eigenvalue) {
        throw ConvergenceError("shifted QR did not converge within " + std::to_string(iterations_per_eigenvalue) +
                               " iterations (window " + std::to_string(lo) + ".." + std::to_string(hi) + ")");
      }
      cplx mu;
      if (iter % 10 == 0) {
        mu = H(hi, hi) + 0.75 * std::abs(H(hi, hi - 1));
      } else {
        const cplx a = H(hi - 1, hi - 1), b = H(hi - 1, hi), c = H(hi, hi - 1), d = H(hi, hi);
        const cplx half = 0.5 * (a - d);
        const cplx disc = std::sqrt(half * half + b * c);
        const cplx m1 = 0.5 * (a + d) + disc, m2 = 0.5 * (a + d) - disc;
        mu = std::abs(m1 - d) < std::abs(m2 - d) ? m1 : m2;
      }
      for (int k = lo; k <= hi; ++k) H(k, k) -= mu;
      // QR: rotations G_k zero H(k+1,k), applied from the left.
      for (int k = lo; k < hi; ++k) {
        const cplx x = H(k, k), y = H(k + 1, k);
        const double ax = std::abs(x), ay = std::abs(y);
        const double r = std::hypot(ax, ay);
        double c;
        cplx s;
        if (r == 0) {
          c = 1;
          s = 0;
        } else if (ax == 0) {
          c = 0;
          s = std::conj(y) / ay;
        } else {
          c = ax / r;
          s = (x / ax) * std::conj(y) / r;
        }
        gc[k] = c;
        gs[k] = s;
        for (int j = k; j <= hi; ++j) {
          const cplx t1 = H(k, j), t2 = H(k + 1, j);
          H(k, j) = c * t1 + s * t2;
          H(k + 1, j) = -std::conj(s) * t1 + c * t2;
        }
      }
      // RQ: apply G_k^* from the right.
      for (int k = lo; k < hi; ++k) {
        const double c = gc[k];
        const cplx s = gs[k];
        const int rmax = std::min(k + 2, hi);
        for (int i = lo; i <= rmax; ++i) {
          const cplx t1 = H(i, k), t2 = H(i, k + 1);
          H(i, k) = c * t1 + std::conj(s) * t2;
          H(i, k + 1) = -s * t1 + c * t2;
        }
      }
      for (int k = lo; k <= hi; ++k) H(k, k) += mu;
    }
    return eig;
  }
};

}  // namespace exrmt
