#include "warpgeo/laplacian.hpp"

#include <cmath>

namespace warpgeo {

namespace {

constexpr double kParallelTol = 1e-8;

struct SideData {
  double fv = 0, b = 0, lap = 0, gb = 0;  // f, |grad f|^2, Delta f, (grad f)(b)
  int m = 0;
};

SideData side_data(const ScalarField& f, const VecD& p) {
  SideData d;
  d.fv = f.value(p);
  d.b = grad_norm_sq(f, p);
  ScalarFn fn;
  Expression e = f.expr;
  fn.value = [e](const VecD& x) { return e.value(x); };
  fn.jet2 = [e](const VecD& x) { return e.jet2(x); };
  d.lap = laplace_beltrami(f.chart.metric_field(), fn, p);
  d.gb = grad_f_of_b(f, p);
  d.m = f.chart.dim();
  return d;
}

double hessian_maxabs(const ScalarField& f, const VecD& p) {
  MatD h = covariant_hessian(f, p);
  double worst = 0.0;
  for (double v : h.a) worst = std::max(worst, std::abs(v));
  return worst;
}

}  // namespace

double laplacian_lift_warp(const WarpSpec& spec, Side side, const VecD& q) {
  if (spec.variant == Variant::H)
    return laplacian_lift(spec, side, side == Side::Base ? spec.f1 : spec.f2, q);
  auto [p1, p2] = spec.split(q);
  SideData d1 = side_data(spec.f1, p1);
  SideData d2 = side_data(spec.f2, p2);
  double c = spec.c;
  double dd = c * c * d1.b * d2.b;
  if (std::abs(1.0 - dd) <= 1e-9)
    throw DegenerateError("Laplacian of a lifted function at a degenerate point", dd);
  // p = the side whose lift is differentiated, s = the other side
  const SideData& p = side == Side::Base ? d1 : d2;
  const SideData& s = side == Side::Base ? d2 : d1;
  double main = (p.lap / s.fv - c * p.b * s.lap / p.fv +
                 p.b * (c * (1.0 - p.m) * s.b + s.m) / (p.fv * s.fv)) /
                (s.fv * (1.0 - dd));
  double grad_terms = c * c / (2.0 * s.fv * (1.0 - dd) * (1.0 - dd)) *
                      (s.b / s.fv * p.gb - c * p.b * p.b / p.fv * s.gb);
  return main + grad_terms;
}

double laplacian_lift(const WarpSpec& spec, Side side, const ScalarField& phi,
                      const VecD& q) {
  if (spec.variant != Variant::H)
    throw ValidationError("general lifted Laplacian applies to variant H only");
  auto [p1, p2] = spec.split(q);
  const Chart& chart = side == Side::Base ? spec.base() : spec.fiber();
  if (phi.chart.coords != chart.coords)
    throw ValidationError("field \"" + phi.expr.source() +
                          "\" is not defined on the expected factor chart");
  double c = spec.c;
  double f1v = spec.f1.value(p1), f2v = spec.f2.value(p2);
  double b1 = grad_norm_sq(spec.f1, p1);
  double u = 1.0 + c * c * f2v * f2v * b1;
  if (side == Side::Base) {
    SideData dphi = side_data(phi, p1);
    SideData df1 = side_data(spec.f1, p1);
    VecD up1 = grad_vec(spec.f1, p1);
    VecD gphi = phi.expr.gradient(p1);
    double s = dot(gphi, up1);  // (grad f1)(phi1)
    MatD hphi = covariant_hessian(phi, p1);
    MatD hf1 = covariant_hessian(spec.f1, p1);
    double hphi_gg = inner(hphi, up1, up1);
    double hf1_gg = inner(hf1, up1, up1);
    double cf2sq = c * c * f2v * f2v;
    return dphi.lap + spec.fiber().dim() * s / (f1v * u) -
           cf2sq / u * (s * df1.lap + hphi_gg - cf2sq * s / u * hf1_gg);
  }
  SideData dphi = side_data(phi, p2);
  VecD up2 = grad_vec(spec.f2, p2);
  VecD gphi = phi.expr.gradient(p2);
  double t = dot(gphi, up2);  // (grad f2)(phi2)
  return (dphi.lap + c * c * f2v * b1 * t / u) / (f1v * f1v);
}

double laplacian_parallel_gradient(const WarpSpec& spec, Side side, const VecD& q) {
  if (spec.variant != Variant::G)
    throw ValidationError("parallel-gradient Laplacian applies to variant G only");
  auto [p1, p2] = spec.split(q);
  double h1 = hessian_maxabs(spec.f1, p1);
  double h2 = hessian_maxabs(spec.f2, p2);
  if (h1 >= kParallelTol || h2 >= kParallelTol)
    throw HypothesisError("parallel-gradient hypothesis violated", h1, h2);
  double c = spec.c;
  double f1v = spec.f1.value(p1), f2v = spec.f2.value(p2);
  double b1 = grad_norm_sq(spec.f1, p1), b2 = grad_norm_sq(spec.f2, p2);
  int m1 = spec.base_dim(), m2 = spec.fiber_dim();
  double dd = c * c * b1 * b2;
  if (std::abs(1.0 - dd) <= 1e-9)
    throw DegenerateError("Laplacian of a lifted function at a degenerate point", dd);
  if (side == Side::Base)
    return ((1.0 - m1) * c * b1 * b2 + m2 * b1) / (f1v * f2v * f2v * (1.0 - dd));
  return ((1.0 - m2) * c * b1 * b2 + m1 * b2) / (f1v * f1v * f2v * (1.0 - dd));
}

double harmonicity_defect(const WarpSpec& spec, Side side, const VecD& q) {
  auto [p1, p2] = spec.split(q);
  double c = spec.c;
  double f1v = spec.f1.value(p1), f2v = spec.f2.value(p2);
  double b1 = grad_norm_sq(spec.f1, p1), b2 = grad_norm_sq(spec.f2, p2);
  if (spec.variant == Variant::G) {
    double dd = c * c * b1 * b2;
    if (std::abs(1.0 - dd) <= 1e-9)
      throw DegenerateError("harmonicity defect at a degenerate point", dd);
    double g1b = grad_f_of_b(spec.f1, p1);
    double g2b = grad_f_of_b(spec.f2, p2);
    int m1 = spec.base_dim(), m2 = spec.fiber_dim();
    if (side == Side::Base)
      return b1 * (c * (1.0 - m1) * b2 + m2) / (f1v * f2v) +
             c * c / (2.0 * (1.0 - dd)) * (b2 / f2v * g1b - c * b1 * b1 / f1v * g2b);
    return b2 * (c * (1.0 - m2) * b1 + m1) / (f1v * f2v) +
           c * c / (2.0 * (1.0 - dd)) * (b1 / f1v * g2b - c * b2 * b2 / f2v * g1b);
  }
  double u = 1.0 + c * c * f2v * f2v * b1;
  if (side == Side::Base) {
    VecD up1 = grad_vec(spec.f1, p1);
    double hgg = inner(covariant_hessian(spec.f1, p1), up1, up1);
    double cf2sq = c * c * f2v * f2v;
    return spec.fiber_dim() * b1 / (f1v * u) - cf2sq / u * (1.0 - cf2sq * b1 / u) * hgg;
  }
  return c * c * f2v * b1 * b2 / (f1v * f1v * u);
}

ScalarFn lift_scalar_fn(const WarpSpec& spec, Side side, const ScalarField& phi,
                        bool with_jets) {
  int m1 = spec.base_dim(), m2 = spec.fiber_dim();
  int off = side == Side::Base ? 0 : m1;
  int fdim = side == Side::Base ? m1 : m2;
  Expression e = phi.expr;
  ScalarFn fn;
  fn.value = [e, off, fdim](const VecD& q) {
    VecD p(q.begin() + off, q.begin() + off + fdim);
    return e.value(p);
  };
  if (with_jets) {
    int n = m1 + m2;
    fn.jet2 = [e, off, fdim, n](const VecD& q) {
      VecD p(q.begin() + off, q.begin() + off + fdim);
      Jet2 inner = e.jet2(p);
      Jet2 out;
      out.value = inner.value;
      out.grad.assign(n, 0.0);
      out.hess = MatD(n, n);
      for (int i = 0; i < fdim; ++i) {
        out.grad[off + i] = inner.grad[i];
        for (int j = 0; j < fdim; ++j) out.hess(off + i, off + j) = inner.hess(i, j);
      }
      return out;
    };
  }
  return fn;
}

LaplacianReport laplacian_report(const WarpSpec& spec, const ScalarField* phi1,
                                 const ScalarField* phi2, const VecD& q,
                                 const OracleOptions& opt) {
  if (spec.variant == Variant::G && (phi1 || phi2))
    throw ValidationError("variant G compares the warping-function lifts only");
  const ScalarField& base_phi = phi1 ? *phi1 : spec.f1;
  const ScalarField& fiber_phi = phi2 ? *phi2 : spec.f2;
  MetricField mf = product_metric_field(spec, opt.fd);
  LaplacianReport rep;
  if (spec.variant == Variant::G) {
    rep.closed_base = laplacian_lift_warp(spec, Side::Base, q);
    rep.closed_fiber = laplacian_lift_warp(spec, Side::Fiber, q);
  } else {
    rep.closed_base = laplacian_lift(spec, Side::Base, base_phi, q);
    rep.closed_fiber = laplacian_lift(spec, Side::Fiber, fiber_phi, q);
  }
  rep.oracle_base =
      laplace_beltrami(mf, lift_scalar_fn(spec, Side::Base, base_phi, !opt.fd), q, opt);
  rep.oracle_fiber =
      laplace_beltrami(mf, lift_scalar_fn(spec, Side::Fiber, fiber_phi, !opt.fd), q, opt);
  rep.diff_base = std::abs(rep.closed_base - rep.oracle_base);
  rep.diff_fiber = std::abs(rep.closed_fiber - rep.oracle_fiber);
  return rep;
}

}  // namespace warpgeo
