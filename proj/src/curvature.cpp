#include "warpgeo/curvature.hpp"

#include <cmath>

namespace warpgeo {

namespace {

constexpr double kParallelTol = 1e-8;

double hessian_maxabs(const ScalarField& f, const VecD& p) {
  MatD h = covariant_hessian(f, p);
  double worst = 0.0;
  for (double v : h.a) worst = std::max(worst, std::abs(v));
  return worst;
}

struct CurvData {
  VecD p1, p2;
  double f1v = 0, f2v = 0, b1 = 0, b2 = 0, u = 0;
  VecD df1, df2, up1, up2;
  MatD g2;
};

CurvData curv_data(const WarpSpec& spec, const VecD& q) {
  CurvData d;
  std::tie(d.p1, d.p2) = spec.split(q);
  d.f1v = spec.f1.value(d.p1);
  d.f2v = spec.f2.value(d.p2);
  d.b1 = grad_norm_sq(spec.f1, d.p1);
  d.b2 = grad_norm_sq(spec.f2, d.p2);
  d.u = 1.0 + spec.c * spec.c * d.f2v * d.f2v * d.b1;
  d.df1 = spec.f1.expr.gradient(d.p1);
  d.df2 = spec.f2.expr.gradient(d.p2);
  d.up1 = grad_vec(spec.f1, d.p1);
  d.up2 = grad_vec(spec.f2, d.p2);
  d.g2 = spec.fiber().metric_at(d.p2);
  return d;
}

void require_variant_h(const WarpSpec& spec) {
  if (spec.variant != Variant::H)
    throw ValidationError("closed-form curvature applies to variant H only");
}

void add_lift_base(VecD& out, int m1, double s, const VecD& v) {
  for (std::size_t i = 0; i < v.size(); ++i) out[i] += s * v[i];
  (void)m1;
}

void add_lift_fiber(VecD& out, int m1, double s, const VecD& v) {
  for (std::size_t i = 0; i < v.size(); ++i) out[m1 + i] += s * v[i];
}

}  // namespace

VecD wedge(const MatD& g, const VecD& x, const VecD& y, const VecD& z) {
  if (y.size() != x.size() || z.size() != x.size() ||
      g.rows != static_cast<int>(x.size()))
    throw ValidationError("wedge: dimension mismatch");
  double gyz = inner(g, y, z), gxz = inner(g, x, z);
  VecD out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = gyz * x[i] - gxz * y[i];
  return out;
}

void check_parallel_hypothesis(const WarpSpec& spec, const VecD& q) {
  auto [p1, p2] = spec.split(q);
  double h1 = hessian_maxabs(spec.f1, p1);
  double h2 = hessian_maxabs(spec.f2, p2);
  if (h1 >= kParallelTol || h2 >= kParallelTol)
    throw HypothesisError("parallel-gradient hypothesis violated", h1, h2);
}

VecD riemann_closed(const WarpSpec& spec, const FactorVec& x, const FactorVec& y,
                    const FactorVec& z, const VecD& q) {
  require_variant_h(spec);
  if (x.side == Side::Fiber && y.side == Side::Base) {
    VecD flipped = riemann_closed(spec, y, x, z, q);
    for (double& v : flipped) v = -v;
    return flipped;
  }
  check_parallel_hypothesis(spec, q);
  CurvData d = curv_data(spec, q);
  int m1 = spec.base_dim(), m2 = spec.fiber_dim();
  double c = spec.c;
  VecD out(m1 + m2, 0.0);

  if (x.side == Side::Base && y.side == Side::Base) {
    if (z.side == Side::Fiber) return out;
    Tens4 r1 = riemann(spec.base().metric_field(), d.p1);
    for (int l = 0; l < m1; ++l) {
      double s = 0.0;
      for (int k = 0; k < m1; ++k)
        for (int i = 0; i < m1; ++i)
          for (int j = 0; j < m1; ++j) s += r1(l, k, i, j) * z.v[k] * x.v[i] * y.v[j];
      out[l] = s;
    }
    return out;
  }

  if (x.side == Side::Fiber && y.side == Side::Fiber) {
    if (z.side == Side::Fiber) {
      Tens4 r2 = riemann(spec.fiber().metric_field(), d.p2);
      VecD r2v(m2, 0.0);
      for (int l = 0; l < m2; ++l) {
        double s = 0.0;
        for (int k = 0; k < m2; ++k)
          for (int i = 0; i < m2; ++i)
            for (int j = 0; j < m2; ++j) s += r2(l, k, i, j) * z.v[k] * x.v[i] * y.v[j];
        r2v[l] = s;
      }
      VecD w = wedge(d.g2, x.v, y.v, z.v);
      add_lift_fiber(out, m1, 1.0, r2v);
      add_lift_fiber(out, m1, -d.b1 / d.u, w);
      double wf2 = dot(w, d.df2);  // ((X2 ^ Y2)Z2)(f2)
      add_lift_base(out, m1, c * c * d.f1v * d.f2v * d.b1 * wf2 / (d.u * d.u), d.up1);
      return out;
    }
    // z on the base
    double z1f1 = dot(z.v, d.df1);
    VecD w = wedge(d.g2, x.v, y.v, d.up2);  // (X2 ^ Y2) grad f2
    add_lift_fiber(out, m1, c * c * d.f2v * d.b1 * z1f1 / (d.f1v * d.u), w);
    return out;
  }

  // x on the base, y on the fiber
  double x1lnf1 = dot(x.v, d.df1) / d.f1v;
  if (z.side == Side::Base) {
    double z1lnf1 = dot(z.v, d.df1) / d.f1v;
    double y2f2 = dot(y.v, d.df2);
    add_lift_fiber(out, m1, c * c * x1lnf1 * z1lnf1 * y2f2 / d.u, d.up2);
    return out;
  }
  double y2f2 = dot(y.v, d.df2), z2f2 = dot(z.v, d.df2);
  VecD w = wedge(d.g2, d.up2, y.v, z.v);  // (grad f2 ^ Y2)Z2
  add_lift_fiber(out, m1, c * c * x1lnf1 * d.f2v * d.b1 / d.u, w);
  add_lift_base(out, m1, -c * c * x1lnf1 * d.f1v * y2f2 * z2f2 / (d.u * d.u), d.up1);
  return out;
}

double ricci_closed(const WarpSpec& spec, const FactorVec& x, const FactorVec& y,
                    const VecD& q) {
  require_variant_h(spec);
  check_parallel_hypothesis(spec, q);
  CurvData d = curv_data(spec, q);
  double c = spec.c;
  int m2 = spec.fiber_dim();
  if (x.side == Side::Base && y.side == Side::Base) {
    MatD ric1 = ricci(spec.base().metric_field(), d.p1);
    double x1lnf1 = dot(x.v, d.df1) / d.f1v;
    double y1lnf1 = dot(y.v, d.df1) / d.f1v;
    return inner(ric1, x.v, y.v) - c * c * d.b2 / d.u * x1lnf1 * y1lnf1;
  }
  if (x.side != y.side) {
    const FactorVec& bx = x.side == Side::Base ? x : y;
    const FactorVec& fy = x.side == Side::Base ? y : x;
    double x1lnf1 = dot(bx.v, d.df1) / d.f1v;
    double y2f2 = dot(fy.v, d.df2);
    return c * c * (m2 - 1) * d.b1 * d.f2v / d.u * x1lnf1 * y2f2;
  }
  MatD ric2 = ricci(spec.fiber().metric_field(), d.p2);
  double x2f2 = dot(x.v, d.df2), y2f2 = dot(y.v, d.df2);
  return inner(ric2, x.v, y.v) - c * c * d.b1 / (d.u * d.u) * x2f2 * y2f2 -
         (m2 - 1) * d.b1 / d.u * inner(d.g2, x.v, y.v);
}

double scalar_closed(const WarpSpec& spec, const VecD& q) {
  require_variant_h(spec);
  check_parallel_hypothesis(spec, q);
  CurvData d = curv_data(spec, q);
  double s1 = spec.base_dim() > 1 ? scalar_curvature(spec.base().metric_field(), d.p1) : 0.0;
  double s2 = spec.fiber_dim() > 1 ? scalar_curvature(spec.fiber().metric_field(), d.p2) : 0.0;
  int m2 = spec.fiber_dim();
  double c = spec.c;
  return s1 + s2 / (d.f1v * d.f1v) - m2 * (m2 - 1) * d.b1 / (d.f1v * d.f1v * d.u) -
         2.0 * c * c * d.b1 * d.b2 / (d.f1v * d.f1v * d.u * d.u);
}

double scalar_constant_curvature(int m1, double k1, int m2, double k2, double f1v,
                                 double f2v, double c, double b1, double b2) {
  double u = 1.0 + c * c * f2v * f2v * b1;
  return m1 * (m1 - 1) * k1 + m2 * (m2 - 1) / (f1v * f1v) * (k2 - b1 / u) -
         2.0 * c * c * b1 * b2 / (f1v * f1v * u * u);
}

CurvatureReport curvature_report(const WarpSpec& spec, const VecD& q,
                                 const OracleOptions& opt) {
  require_variant_h(spec);
  check_parallel_hypothesis(spec, q);
  int m1 = spec.base_dim(), m2 = spec.fiber_dim();
  int n = m1 + m2;
  MetricField mf = product_metric_field(spec, opt.fd);
  Tens4 rp = riemann(mf, q, opt);
  MatD ricp = ricci(mf, q, opt);

  auto coord_vec = [&](int idx) {
    FactorVec fv;
    if (idx < m1) {
      fv.side = Side::Base;
      fv.v.assign(m1, 0.0);
      fv.v[idx] = 1.0;
    } else {
      fv.side = Side::Fiber;
      fv.v.assign(m2, 0.0);
      fv.v[idx - m1] = 1.0;
    }
    return fv;
  };

  CurvatureReport rep;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        VecD closed = riemann_closed(spec, coord_vec(i), coord_vec(j), coord_vec(k), q);
        for (int l = 0; l < n; ++l) {
          double diff = std::abs(closed[l] - rp(l, k, i, j));
          rep.riemann_diff = std::max(rep.riemann_diff, diff);
        }
      }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double closed = ricci_closed(spec, coord_vec(i), coord_vec(j), q);
      rep.ricci_diff = std::max(rep.ricci_diff, std::abs(closed - ricp(i, j)));
    }
  rep.scalar_closed_v = scalar_closed(spec, q);
  rep.scalar_oracle_v = scalar_curvature(mf, q, opt);
  rep.scalar_diff = std::abs(rep.scalar_closed_v - rep.scalar_oracle_v);
  rep.worst = std::max({rep.riemann_diff, rep.ricci_diff, rep.scalar_diff});
  return rep;
}

}  // namespace warpgeo
