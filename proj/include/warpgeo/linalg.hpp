#pragma once

// Small dense vectors, matrices and rank-3/4 index arrays.  Matrices are
// templated on the scalar so the same routines run over double and over
// nested duals; pivot decisions always look at the innermost double value.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "warpgeo/dual.hpp"
#include "warpgeo/errors.hpp"

namespace warpgeo {

using VecD = std::vector<double>;

template <class S>
struct Mat {
  int rows = 0, cols = 0;
  std::vector<S> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, S(0.0)) {}

  S& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  const S& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = S(1.0);
    return m;
  }
};

using MatD = Mat<double>;

// rank-3 array, e.g. Christoffel symbols gamma(k,i,j) = Gamma^k_{ij}
struct Tens3 {
  int n0 = 0, n1 = 0, n2 = 0;
  VecD a;

  Tens3() = default;
  Tens3(int a0, int a1, int a2)
      : n0(a0), n1(a1), n2(a2), a(static_cast<std::size_t>(a0) * a1 * a2, 0.0) {}

  double& operator()(int i, int j, int k) {
    return a[(static_cast<std::size_t>(i) * n1 + j) * n2 + k];
  }
  double operator()(int i, int j, int k) const {
    return a[(static_cast<std::size_t>(i) * n1 + j) * n2 + k];
  }
};

// rank-4 array, e.g. riemann(l,k,i,j) = R^l_{kij}
struct Tens4 {
  int n0 = 0, n1 = 0, n2 = 0, n3 = 0;
  VecD a;

  Tens4() = default;
  Tens4(int a0, int a1, int a2, int a3)
      : n0(a0), n1(a1), n2(a2), n3(a3),
        a(static_cast<std::size_t>(a0) * a1 * a2 * a3, 0.0) {}

  double& operator()(int i, int j, int k, int l) {
    return a[((static_cast<std::size_t>(i) * n1 + j) * n2 + k) * n3 + l];
  }
  double operator()(int i, int j, int k, int l) const {
    return a[((static_cast<std::size_t>(i) * n1 + j) * n2 + k) * n3 + l];
  }
};

// metric value with first (and optionally second) coordinate derivatives.
// dg(a,i,j) = d_a g_ij, ddg(a,b,i,j) = d_a d_b g_ij.
struct MetricJets1 {
  MatD g;
  Tens3 dg;
};

struct MetricJets2 {
  MatD g;
  Tens3 dg;
  Tens4 ddg;
};

template <class S>
std::vector<S> matvec(const Mat<S>& m, const std::vector<S>& x) {
  std::vector<S> out(m.rows, S(0.0));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) out[i] = out[i] + m(i, j) * x[j];
  return out;
}

template <class S>
Mat<S> matmul(const Mat<S>& a, const Mat<S>& b) {
  Mat<S> out(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k)
      for (int j = 0; j < b.cols; ++j) out(i, j) = out(i, j) + a(i, k) * b(k, j);
  return out;
}

template <class S>
S dot(const std::vector<S>& x, const std::vector<S>& y) {
  S s(0.0);
  for (std::size_t i = 0; i < x.size(); ++i) s = s + x[i] * y[i];
  return s;
}

// x^T g y
template <class S>
S inner(const Mat<S>& g, const std::vector<S>& x, const std::vector<S>& y) {
  S s(0.0);
  for (int i = 0; i < g.rows; ++i)
    for (int j = 0; j < g.cols; ++j) s = s + x[i] * g(i, j) * y[j];
  return s;
}

inline double max_abs(const VecD& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

inline double max_abs_diff(const MatD& a, const MatD& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.a.size(); ++i) m = std::max(m, std::abs(a.a[i] - b.a[i]));
  return m;
}

// LU factorization with partial pivoting; pivots compare innermost values
template <class S>
struct LuFactors {
  Mat<S> lu;
  std::vector<int> piv;
  int sign = 1;
  bool singular = false;
};

template <class S>
LuFactors<S> lu_factor(Mat<S> m) {
  int n = m.rows;
  LuFactors<S> f;
  f.piv.resize(n);
  for (int i = 0; i < n; ++i) f.piv[i] = i;
  for (int col = 0; col < n; ++col) {
    int best = col;
    double best_mag = std::abs(scalar_value(m(col, col)));
    for (int r = col + 1; r < n; ++r) {
      double mag = std::abs(scalar_value(m(r, col)));
      if (mag > best_mag) {
        best = r;
        best_mag = mag;
      }
    }
    if (best_mag == 0.0) {
      f.singular = true;
      continue;
    }
    if (best != col) {
      for (int j = 0; j < n; ++j) std::swap(m(col, j), m(best, j));
      std::swap(f.piv[col], f.piv[best]);
      f.sign = -f.sign;
    }
    for (int r = col + 1; r < n; ++r) {
      S factor = m(r, col) / m(col, col);
      m(r, col) = factor;
      for (int j = col + 1; j < n; ++j) m(r, j) = m(r, j) - factor * m(col, j);
    }
  }
  f.lu = std::move(m);
  return f;
}

template <class S>
S det_lu(const LuFactors<S>& f) {
  if (f.singular) return S(0.0);
  S d(static_cast<double>(f.sign));
  for (int i = 0; i < f.lu.rows; ++i) d = d * f.lu(i, i);
  return d;
}

template <class S>
S det(const Mat<S>& m) {
  return det_lu(lu_factor(m));
}

template <class S>
std::vector<S> solve_lu(const LuFactors<S>& f, const std::vector<S>& rhs) {
  if (f.singular) throw NumericError("solve on a singular matrix");
  int n = f.lu.rows;
  std::vector<S> x(n, S(0.0));
  for (int i = 0; i < n; ++i) x[i] = rhs[f.piv[i]];
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j) x[i] = x[i] - f.lu(i, j) * x[j];
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) x[i] = x[i] - f.lu(i, j) * x[j];
    x[i] = x[i] / f.lu(i, i);
  }
  return x;
}

template <class S>
Mat<S> inverse(const Mat<S>& m) {
  LuFactors<S> f = lu_factor(m);
  if (f.singular) throw NumericError("inverse of a singular matrix");
  int n = m.rows;
  Mat<S> inv(n, n);
  std::vector<S> e(n, S(0.0));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) e[i] = S(i == j ? 1.0 : 0.0);
    std::vector<S> col = solve_lu(f, e);
    for (int i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

// Cholesky of a symmetric matrix; returns false when a pivot is not positive
inline bool cholesky(const MatD& m, MatD* l_out = nullptr) {
  int n = m.rows;
  MatD l(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = m(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      if (i == j) {
        if (s <= 0.0) return false;
        l(i, i) = std::sqrt(s);
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
  if (l_out) *l_out = std::move(l);
  return true;
}

// eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending
inline VecD sym_eigenvalues(MatD m) {
  int n = m.rows;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += m(i, j) * m(i, j);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(m(p, q)) < 1e-300) continue;
        double theta = (m(q, q) - m(p, p)) / (2.0 * m(p, q));
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double mkp = m(k, p), mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (int k = 0; k < n; ++k) {
          double mpk = m(p, k), mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
      }
    }
  }
  VecD ev(n);
  for (int i = 0; i < n; ++i) ev[i] = m(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

inline double min_eigenvalue(const MatD& m) { return sym_eigenvalues(m).front(); }

inline double norm_inf(const MatD& m) {
  double best = 0.0;
  for (int i = 0; i < m.rows; ++i) {
    double row = 0.0;
    for (int j = 0; j < m.cols; ++j) row += std::abs(m(i, j));
    best = std::max(best, row);
  }
  return best;
}

}  // namespace warpgeo
