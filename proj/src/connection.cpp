#include "warpgeo/connection.hpp"

#include <cmath>

namespace warpgeo {

namespace {

const Chart& side_chart(const WarpSpec& spec, Side side) {
  return side == Side::Base ? spec.base() : spec.fiber();
}

// directional derivative of f along a factor vector: X(f) = X^k d_k f
double apply_vec(const VecD& xv, const VecD& df) { return dot(xv, df); }

// factor covariant derivative (nabla_X Y)^j = X^k d_k Y^j + Gamma^j_{kl} X^k Y^l
VecD factor_nabla(const Chart& chart, const VecD& xv, const LiftedField& y,
                  const VecD& p) {
  Tens3 gamma = christoffel(chart.metric_field(), p);
  MatD jac = y.jacobian(p);
  VecD yv = y.value(p);
  int n = chart.dim();
  VecD out(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
      s += xv[k] * jac(j, k);
      for (int l = 0; l < n; ++l) s += gamma(j, k, l) * xv[k] * yv[l];
    }
    out[j] = s;
  }
  return out;
}

struct PointData {
  VecD p1, p2;
  double f1v = 0, f2v = 0, b1 = 0, b2 = 0;
  VecD df1, df2;    // coordinate differentials
  VecD up1, up2;    // raised gradients on the factors
};

PointData point_data(const WarpSpec& spec, const VecD& q) {
  PointData d;
  std::tie(d.p1, d.p2) = spec.split(q);
  d.f1v = spec.f1.value(d.p1);
  d.f2v = spec.f2.value(d.p2);
  if (d.f1v <= 0.0 || d.f2v <= 0.0)
    throw DomainError("warping function not positive at the evaluation point");
  d.df1 = spec.f1.expr.gradient(d.p1);
  d.df2 = spec.f2.expr.gradient(d.p2);
  d.up1 = grad_vec(spec.f1, d.p1);
  d.up2 = grad_vec(spec.f2, d.p2);
  d.b1 = dot(d.df1, d.up1);
  d.b2 = dot(d.df2, d.up2);
  return d;
}

double degeneracy_factor(const WarpSpec& spec, const PointData& d) {
  double dd = spec.c * spec.c * d.b1 * d.b2;
  if (std::abs(1.0 - dd) <= 1e-9)
    throw DegenerateError("gradient of a lifted function at a degenerate point", dd);
  return 1.0 - dd;
}

void axpy(VecD& acc, double s, const VecD& x) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += s * x[i];
}

}  // namespace

LiftedField LiftedField::on(const WarpSpec& spec, Side side,
                            const std::vector<std::string>& sources) {
  const Chart& chart = side_chart(spec, side);
  if (static_cast<int>(sources.size()) != chart.dim())
    throw ValidationError("lifted field needs one component per factor coordinate");
  LiftedField f;
  f.side = side;
  for (const std::string& src : sources)
    f.comps.push_back(Expression::parse(src, chart.coords));
  return f;
}

LiftedField LiftedField::coordinate(const WarpSpec& spec, Side side, int k) {
  const Chart& chart = side_chart(spec, side);
  if (k < 0 || k >= chart.dim()) throw ValidationError("coordinate index out of range");
  std::vector<std::string> sources(chart.dim(), "0");
  sources[k] = "1";
  return on(spec, side, sources);
}

VecD LiftedField::value(const VecD& factor_point) const {
  VecD out(comps.size());
  for (std::size_t i = 0; i < comps.size(); ++i) out[i] = comps[i].value(factor_point);
  return out;
}

MatD LiftedField::jacobian(const VecD& factor_point) const {
  int n = static_cast<int>(comps.size());
  MatD jac(n, n);
  for (int i = 0; i < n; ++i) {
    VecD g = comps[i].gradient(factor_point);
    for (int j = 0; j < n; ++j) jac(i, j) = g[j];
  }
  return jac;
}

VecD grad_lift_warp(const WarpSpec& spec, Side side, const VecD& q) {
  PointData d = point_data(spec, q);
  int m1 = spec.base_dim(), m2 = spec.fiber_dim();
  VecD out(m1 + m2, 0.0);
  double c = spec.c;
  if (spec.variant == Variant::G) {
    double one_minus = degeneracy_factor(spec, d);
    if (side == Side::Base) {
      for (int i = 0; i < m1; ++i) out[i] = d.up1[i] / (d.f2v * d.f2v * one_minus);
      for (int j = 0; j < m2; ++j)
        out[m1 + j] = -c * d.b1 * d.up2[j] / (d.f1v * d.f2v * one_minus);
    } else {
      for (int j = 0; j < m2; ++j) out[m1 + j] = d.up2[j] / (d.f1v * d.f1v * one_minus);
      for (int i = 0; i < m1; ++i)
        out[i] = -c * d.b2 * d.up1[i] / (d.f1v * d.f2v * one_minus);
    }
  } else {
    if (side == Side::Base) {
      double u = 1.0 + c * c * d.f2v * d.f2v * d.b1;
      for (int i = 0; i < m1; ++i) out[i] = d.up1[i] / u;
    } else {
      for (int j = 0; j < m2; ++j) out[m1 + j] = d.up2[j] / (d.f1v * d.f1v);
    }
  }
  return out;
}

VecD grad_lift(const WarpSpec& spec, Side side, const ScalarField& phi, const VecD& q) {
  const Chart& chart = side_chart(spec, side);
  if (phi.chart.coords != chart.coords)
    throw ValidationError("field \"" + phi.expr.source() +
                          "\" is not defined on the expected factor chart");
  PointData d = point_data(spec, q);
  int m1 = spec.base_dim(), m2 = spec.fiber_dim();
  const VecD& p = side == Side::Base ? d.p1 : d.p2;
  VecD upphi = grad_vec(phi, p);
  VecD dphi = phi.expr.gradient(p);
  VecD out(m1 + m2, 0.0);
  double c = spec.c;
  if (spec.variant == Variant::G) {
    if (side == Side::Base) {
      double s = dot(dphi, d.up1);  // g1(grad phi, grad f1)
      for (int i = 0; i < m1; ++i) out[i] = upphi[i] / (d.f2v * d.f2v);
      axpy(out, -c * d.f1v * s / d.f2v, grad_lift_warp(spec, Side::Fiber, q));
    } else {
      double t = dot(dphi, d.up2);
      for (int j = 0; j < m2; ++j) out[m1 + j] = upphi[j] / (d.f1v * d.f1v);
      axpy(out, -c * d.f2v * t / d.f1v, grad_lift_warp(spec, Side::Base, q));
    }
  } else {
    if (side == Side::Base) {
      double s = dot(dphi, d.up1);
      double u = 1.0 + c * c * d.f2v * d.f2v * d.b1;
      for (int i = 0; i < m1; ++i)
        out[i] = upphi[i] - c * c * d.f2v * d.f2v * s * d.up1[i] / u;
    } else {
      for (int j = 0; j < m2; ++j) out[m1 + j] = upphi[j] / (d.f1v * d.f1v);
    }
  }
  return out;
}

double b_tensor(const WarpSpec& spec, Side side, const VecD& xv, const VecD& yv,
                const VecD& q) {
  auto [p1, p2] = spec.split(q);
  const ScalarField& f = side == Side::Base ? spec.f1 : spec.f2;
  const VecD& p = side == Side::Base ? p1 : p2;
  MatD hess = covariant_hessian(f, p);
  VecD df = f.expr.gradient(p);
  MatD g = f.chart.metric_at(p);
  double fv = f.value(p);
  return spec.c * fv * inner(hess, xv, yv) + spec.c * apply_vec(xv, df) * apply_vec(yv, df) -
         inner(g, xv, yv);
}

VecD nabla_lifted(const WarpSpec& spec, const LiftedField& x, const LiftedField& y,
                  const VecD& q) {
  PointData d = point_data(spec, q);
  int m1 = spec.base_dim(), m2 = spec.fiber_dim();
  double c = spec.c;
  VecD out(m1 + m2, 0.0);
  if (x.side == Side::Base && y.side == Side::Base) {
    VecD xv = x.value(d.p1), yv = y.value(d.p1);
    VecD fac = factor_nabla(spec.base(), xv, y, d.p1);
    for (int i = 0; i < m1; ++i) out[i] = fac[i];
    if (spec.variant == Variant::G) {
      double b = b_tensor(spec, Side::Base, xv, yv, q);
      axpy(out, d.f2v * b, grad_lift_warp(spec, Side::Fiber, q));
    } else {
      double u = 1.0 + c * c * d.f2v * d.f2v * d.b1;
      MatD hess = covariant_hessian(spec.f1, d.p1);
      double hxy = inner(hess, xv, yv);
      double xf = apply_vec(xv, d.df1), yf = apply_vec(yv, d.df1);
      for (int i = 0; i < m1; ++i) out[i] += c * c * d.f2v * d.f2v * hxy * d.up1[i] / u;
      for (int j = 0; j < m2; ++j)
        out[m1 + j] -= c * c * d.f2v * (xf / d.f1v) * (yf / d.f1v) * d.up2[j];
    }
    return out;
  }
  if (x.side == Side::Fiber && y.side == Side::Fiber) {
    VecD xv = x.value(d.p2), yv = y.value(d.p2);
    VecD fac = factor_nabla(spec.fiber(), xv, y, d.p2);
    for (int j = 0; j < m2; ++j) out[m1 + j] = fac[j];
    if (spec.variant == Variant::G) {
      double b = b_tensor(spec, Side::Fiber, xv, yv, q);
      axpy(out, d.f1v * b, grad_lift_warp(spec, Side::Base, q));
    } else {
      double u = 1.0 + c * c * d.f2v * d.f2v * d.b1;
      double gxy = inner(spec.fiber().metric_at(d.p2), xv, yv);
      for (int i = 0; i < m1; ++i) out[i] -= d.f1v * gxy * d.up1[i] / u;
    }
    return out;
  }
  // mixed pair: the value is order independent, so normalize to (base, fiber)
  const LiftedField& bx = x.side == Side::Base ? x : y;
  const LiftedField& fy = x.side == Side::Base ? y : x;
  VecD bv = bx.value(d.p1), fv = fy.value(d.p2);
  double bf1 = apply_vec(bv, d.df1);  // X1(f1)
  double ff2 = apply_vec(fv, d.df2);  // Y2(f2)
  if (spec.variant == Variant::G) {
    VecD g1 = grad_lift_warp(spec, Side::Base, q);
    VecD g2 = grad_lift_warp(spec, Side::Fiber, q);
    axpy(out, -c * bf1 * ff2 * d.f2v, g1);
    axpy(out, -c * bf1 * ff2 * d.f1v, g2);
    double lnf2 = ff2 / d.f2v;  // Y2(ln f2)
    double lnf1 = bf1 / d.f1v;  // X1(ln f1)
    for (int i = 0; i < m1; ++i) out[i] += lnf2 * bv[i];
    for (int j = 0; j < m2; ++j) out[m1 + j] += lnf1 * fv[j];
  } else {
    double u = 1.0 + c * c * d.f2v * d.f2v * d.b1;
    for (int i = 0; i < m1; ++i) out[i] += c * c * d.f2v * ff2 * bf1 * d.up1[i] / u;
    double lnf1 = bf1 / d.f1v;
    for (int j = 0; j < m2; ++j) out[m1 + j] += lnf1 * fv[j];
  }
  return out;
}

}  // namespace warpgeo
