#pragma once

// The two product metrics on base x fiber built from warping functions f1
// (on the base), f2 (on the fiber) and a coupling constant c.
//
// Variant G:  G = f2^2 pi1*g1 + f1^2 pi2*g2 + c f1 f2 (df1 (x) df2 + df2 (x) df1)
//   blocks: base f2^2 g1, fiber f1^2 g2, cross c f1 f2 (d_i f1)(d_j f2)
//
// Variant H:  h = pi1*g1 + f1^2 pi2*g2 + (c^2/2) f2^2 (df1 (x) df1 + df1 (x) df1)
//   blocks: base g1 + c^2 f2^2 (d_i f1)(d_j f1), fiber f1^2 g2, cross zero
//
// Points on the product are concatenated coordinate vectors (base first).

#include <span>
#include <utility>

#include "warpgeo/chart.hpp"

namespace warpgeo {

enum class Variant { G, H };

struct WarpSpec {
  Variant variant = Variant::G;
  ScalarField f1;  // on the base chart, must stay positive on its domain
  ScalarField f2;  // on the fiber chart, must stay positive on its domain
  double c = 0.0;

  const Chart& base() const { return f1.chart; }
  const Chart& fiber() const { return f2.chart; }
  int base_dim() const { return f1.chart.dim(); }
  int fiber_dim() const { return f2.chart.dim(); }
  int dim() const { return base_dim() + fiber_dim(); }

  // validates the warping functions by sampling: both must be positive at
  // 256 low-discrepancy points of their domains
  static WarpSpec make(Variant variant, ScalarField f1, ScalarField f2, double c);

  std::pair<VecD, VecD> split(const VecD& q) const;
  VecD join(const VecD& p1, const VecD& p2) const;
  void require_in_domain(const VecD& q) const;
};

// product vectors are concatenated too
VecD lift_base(const WarpSpec& spec, const VecD& v1);
VecD lift_fiber(const WarpSpec& spec, const VecD& v2);

template <class S>
Mat<S> assemble_eval(const WarpSpec& spec, std::span<const S> xq) {
  int m1 = spec.base_dim(), m2 = spec.fiber_dim();
  std::span<const S> x = xq.subspan(0, m1);
  std::span<const S> y = xq.subspan(m1, m2);
  Mat<S> g1 = spec.base().metric_eval<S>(x);
  Mat<S> g2 = spec.fiber().metric_eval<S>(y);
  // warping values and first derivatives in one pass each
  std::vector<S> xv(x.begin(), x.end()), yv(y.begin(), y.end());
  std::vector<Dual<S>> xs = seed_dirs<S>(std::span<const S>(xv));
  std::vector<Dual<S>> ys = seed_dirs<S>(std::span<const S>(yv));
  Dual<S> f1 = spec.f1.expr.eval<Dual<S>>(std::span<const Dual<S>>(xs));
  Dual<S> f2 = spec.f2.expr.eval<Dual<S>>(std::span<const Dual<S>>(ys));
  if (scalar_value(f1) <= 0.0)
    throw DomainError("warping function f1 is not positive at the evaluation point");
  if (scalar_value(f2) <= 0.0)
    throw DomainError("warping function f2 is not positive at the evaluation point");
  Mat<S> g(m1 + m2, m1 + m2);
  if (spec.variant == Variant::G) {
    S w1 = f2.v * f2.v, w2 = f1.v * f1.v;
    S cross = S(spec.c) * f1.v * f2.v;
    for (int i = 0; i < m1; ++i)
      for (int j = 0; j < m1; ++j) g(i, j) = w1 * g1(i, j);
    for (int i = 0; i < m2; ++i)
      for (int j = 0; j < m2; ++j) g(m1 + i, m1 + j) = w2 * g2(i, j);
    for (int i = 0; i < m1; ++i)
      for (int j = 0; j < m2; ++j) {
        S v = cross * partial(f1, i) * partial(f2, j);
        g(i, m1 + j) = v;
        g(m1 + j, i) = v;
      }
  } else {
    S w2 = f1.v * f1.v;
    S cc = S(spec.c * spec.c) * f2.v * f2.v;
    for (int i = 0; i < m1; ++i)
      for (int j = 0; j < m1; ++j) g(i, j) = g1(i, j) + cc * partial(f1, i) * partial(f1, j);
    for (int i = 0; i < m2; ++i)
      for (int j = 0; j < m2; ++j) g(m1 + i, m1 + j) = w2 * g2(i, j);
  }
  return g;
}

MatD assemble(const WarpSpec& spec, const VecD& q);

// adapter handing the assembled metric to the coordinate oracle
MetricField product_metric_field(const WarpSpec& spec, bool fd = false);

enum class MetricClass { Riemannian, Degenerate, Indefinite };

struct RiemannianCheck {
  MetricClass cls = MetricClass::Riemannian;
  double diagnostic = 0.0;  // c^2 b1 b2 for variant G, 0 for variant H
};

// variant G is riemannian iff c^2 b1 b2 < 1 at the point (threshold 1e-9);
// variant H always is.  the closed-form classification is cross-checked
// against a Cholesky factorization of the assembled matrix.
RiemannianCheck is_riemannian(const WarpSpec& spec, const VecD& q);

// det G = det(g1) det(g2) f1^(2 m2) f2^(2 m1) (1 - c^2 b1 b2), variant G only
double det_closed_form(const WarpSpec& spec, const VecD& q);

// inverse metric.  variant G uses the closed-form blocks
//   base:  (1/f2^2) [g1^{jk} + c^2 b2/(1-c^2 b1 b2) (grad f1)^j (grad f1)^k]
//   fiber: (1/f1^2) [g2^{jk} + c^2 b1/(1-c^2 b1 b2) (grad f2)^j (grad f2)^k]
//   cross: -c/(f1 f2 (1-c^2 b1 b2)) (grad f1)^j (grad f2)^k
// and errors on a degenerate point; variant H inverts numerically and
// reports the infinity-norm condition number through cond_out
MatD cometric(const WarpSpec& spec, const VecD& q, double* cond_out = nullptr);

// variant G: rebuild the product vector X determined by
//   G(X, Z1 lifted) = G(phi2 X1 lifted + phi1 X2 lifted, Z1 lifted)  for all Z1
//   G(X, Z2 lifted) = G(psi2 Y1 lifted + psi1 Y2 lifted, Z2 lifted)  for all Z2
// with X1, Y1 base vectors and X2, Y2 fiber vectors
VecD reconstruct_vector(const WarpSpec& spec, const VecD& q, const VecD& x1,
                        const VecD& x2, const VecD& y1, const VecD& y2, double phi1,
                        double phi2, double psi1, double psi2);

// low-discrepancy points of the product box
std::vector<VecD> sample_product(const WarpSpec& spec, int count, std::uint64_t seed,
                                 double margin_frac);

}  // namespace warpgeo
