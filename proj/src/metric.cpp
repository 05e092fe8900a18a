#include "warpgeo/metric.hpp"

#include <cmath>

#include "warpgeo/connection.hpp"

namespace warpgeo {

namespace {

constexpr double kDegTol = 1e-9;
// the Cholesky cross-check is only binding when the closed-form
// classification clears the degeneracy threshold by a safe band; right at
// the threshold the factorization's last pivot sits inside its own roundoff
constexpr double kAgreeBand = 1e-6;

}  // namespace

WarpSpec WarpSpec::make(Variant variant, ScalarField f1, ScalarField f2, double c) {
  if (!std::isfinite(c)) throw ValidationError("coupling constant must be finite");
  WarpSpec spec;
  spec.variant = variant;
  spec.f1 = std::move(f1);
  spec.f2 = std::move(f2);
  spec.c = c;
  for (int side = 0; side < 2; ++side) {
    const ScalarField& f = side == 0 ? spec.f1 : spec.f2;
    std::vector<VecD> pts = sample_box(f.chart.domain, 256, 42, 1e-3);
    for (const VecD& p : pts) {
      if (!(f.value(p) > 0.0))
        throw ValidationError(std::string("warping function f") + (side == 0 ? "1" : "2") +
                              " is not positive everywhere on its chart domain");
    }
  }
  return spec;
}

std::pair<VecD, VecD> WarpSpec::split(const VecD& q) const {
  int m1 = base_dim(), m2 = fiber_dim();
  if (static_cast<int>(q.size()) != m1 + m2)
    throw DomainError("product point has wrong dimension");
  return {VecD(q.begin(), q.begin() + m1), VecD(q.begin() + m1, q.end())};
}

VecD WarpSpec::join(const VecD& p1, const VecD& p2) const {
  VecD q(p1);
  q.insert(q.end(), p2.begin(), p2.end());
  return q;
}

void WarpSpec::require_in_domain(const VecD& q) const {
  auto [p1, p2] = split(q);
  base().require_in_domain(p1);
  fiber().require_in_domain(p2);
}

VecD lift_base(const WarpSpec& spec, const VecD& v1) {
  VecD v(spec.dim(), 0.0);
  for (int i = 0; i < spec.base_dim(); ++i) v[i] = v1[i];
  return v;
}

VecD lift_fiber(const WarpSpec& spec, const VecD& v2) {
  VecD v(spec.dim(), 0.0);
  for (int i = 0; i < spec.fiber_dim(); ++i) v[spec.base_dim() + i] = v2[i];
  return v;
}

MatD assemble(const WarpSpec& spec, const VecD& q) {
  if (static_cast<int>(q.size()) != spec.dim())
    throw DomainError("product point has wrong dimension");
  return assemble_eval<double>(spec, std::span<const double>(q));
}

MetricField product_metric_field(const WarpSpec& spec, bool fd) {
  MetricField mf;
  mf.dim = spec.dim();
  WarpSpec s = spec;
  mf.value = [s](const VecD& q) { return assemble(s, q); };
  if (!fd) {
    WarpSpec s1 = spec;
    mf.jet1 = [s1](const VecD& q) {
      int n = s1.dim();
      std::vector<D1> xs = seed_dirs<double>(std::span<const double>(q));
      Mat<D1> gd = assemble_eval<D1>(s1, std::span<const D1>(xs));
      MetricJets1 jets;
      jets.g = MatD(n, n);
      jets.dg = Tens3(n, n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          jets.g(i, j) = gd(i, j).v;
          for (int a = 0; a < n; ++a) jets.dg(a, i, j) = partial(gd(i, j), a);
        }
      return jets;
    };
    WarpSpec s2 = spec;
    mf.jet2 = [s2](const VecD& q) {
      int n = s2.dim();
      std::vector<D1> lv1 = seed_dirs<double>(std::span<const double>(q));
      std::vector<D2> lv2 = seed_dirs<D1>(std::span<const D1>(lv1));
      Mat<D2> gd = assemble_eval<D2>(s2, std::span<const D2>(lv2));
      MetricJets2 jets;
      jets.g = MatD(n, n);
      jets.dg = Tens3(n, n, n);
      jets.ddg = Tens4(n, n, n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const D2& e = gd(i, j);
          jets.g(i, j) = e.v.v;
          for (int a = 0; a < n; ++a) {
            D1 da = partial(e, a);
            jets.dg(a, i, j) = da.v;
            for (int b = 0; b < n; ++b) jets.ddg(a, b, i, j) = partial(da, b);
          }
        }
      return jets;
    };
  }
  return mf;
}

RiemannianCheck is_riemannian(const WarpSpec& spec, const VecD& q) {
  RiemannianCheck out;
  bool chol_ok = cholesky(assemble(spec, q));
  if (spec.variant == Variant::H) {
    out.cls = MetricClass::Riemannian;
    out.diagnostic = 0.0;
    if (!chol_ok)
      throw NumericError("variant H matrix failed Cholesky although it is always riemannian");
    return out;
  }
  auto [p1, p2] = spec.split(q);
  double b1 = grad_norm_sq(spec.f1, p1);
  double b2 = grad_norm_sq(spec.f2, p2);
  double d = spec.c * spec.c * b1 * b2;
  out.diagnostic = d;
  if (d < 1.0 - kDegTol)
    out.cls = MetricClass::Riemannian;
  else if (d > 1.0 + kDegTol)
    out.cls = MetricClass::Indefinite;
  else
    out.cls = MetricClass::Degenerate;
  if (out.cls == MetricClass::Riemannian && d < 1.0 - kAgreeBand && !chol_ok)
    throw NumericError("closed-form classification says riemannian but Cholesky failed");
  if (out.cls == MetricClass::Indefinite && d > 1.0 + kAgreeBand && chol_ok)
    throw NumericError("closed-form classification says indefinite but Cholesky succeeded");
  return out;
}

double det_closed_form(const WarpSpec& spec, const VecD& q) {
  if (spec.variant != Variant::G)
    throw ValidationError("closed-form determinant applies to variant G only");
  auto [p1, p2] = spec.split(q);
  double det1 = det(spec.base().metric_at(p1));
  double det2 = det(spec.fiber().metric_at(p2));
  double f1v = spec.f1.value(p1), f2v = spec.f2.value(p2);
  double b1 = grad_norm_sq(spec.f1, p1);
  double b2 = grad_norm_sq(spec.f2, p2);
  int m1 = spec.base_dim(), m2 = spec.fiber_dim();
  return det1 * det2 * ipow(f1v, 2 * m2) * ipow(f2v, 2 * m1) *
         (1.0 - spec.c * spec.c * b1 * b2);
}

MatD cometric(const WarpSpec& spec, const VecD& q, double* cond_out) {
  MatD g = assemble(spec, q);
  int m1 = spec.base_dim(), m2 = spec.fiber_dim();
  MatD inv;
  if (spec.variant == Variant::G) {
    RiemannianCheck rc = is_riemannian(spec, q);
    if (rc.cls == MetricClass::Degenerate)
      throw DegenerateError("cometric at a degenerate point", rc.diagnostic);
    auto [p1, p2] = spec.split(q);
    double f1v = spec.f1.value(p1), f2v = spec.f2.value(p2);
    double b1 = grad_norm_sq(spec.f1, p1), b2 = grad_norm_sq(spec.f2, p2);
    double c = spec.c;
    double d = c * c * b1 * b2;
    MatD g1inv = inverse(spec.base().metric_at(p1));
    MatD g2inv = inverse(spec.fiber().metric_at(p2));
    VecD up1 = grad_vec(spec.f1, p1);
    VecD up2 = grad_vec(spec.f2, p2);
    inv = MatD(m1 + m2, m1 + m2);
    double s1 = c * c * b2 / (1.0 - d);
    double s2 = c * c * b1 / (1.0 - d);
    double sx = -c / (f1v * f2v * (1.0 - d));
    for (int i = 0; i < m1; ++i)
      for (int j = 0; j < m1; ++j)
        inv(i, j) = (g1inv(i, j) + s1 * up1[i] * up1[j]) / (f2v * f2v);
    for (int i = 0; i < m2; ++i)
      for (int j = 0; j < m2; ++j)
        inv(m1 + i, m1 + j) = (g2inv(i, j) + s2 * up2[i] * up2[j]) / (f1v * f1v);
    for (int i = 0; i < m1; ++i)
      for (int j = 0; j < m2; ++j) {
        double v = sx * up1[i] * up2[j];
        inv(i, m1 + j) = v;
        inv(m1 + j, i) = v;
      }
  } else {
    inv = inverse(g);
  }
  if (cond_out) *cond_out = norm_inf(g) * norm_inf(inv);
  return inv;
}

VecD reconstruct_vector(const WarpSpec& spec, const VecD& q, const VecD& x1,
                        const VecD& x2, const VecD& y1, const VecD& y2, double phi1,
                        double phi2, double psi1, double psi2) {
  if (spec.variant != Variant::G)
    throw ValidationError("vector reconstruction applies to variant G only");
  auto [p1, p2] = spec.split(q);
  double f1v = spec.f1.value(p1), f2v = spec.f2.value(p2);
  double c = spec.c;
  VecD df1 = spec.f1.expr.gradient(p1);
  VecD df2 = spec.f2.expr.gradient(p2);
  VecD grad1 = grad_lift_warp(spec, Side::Base, q);
  VecD grad2 = grad_lift_warp(spec, Side::Fiber, q);
  double a = c * f1v * f2v * (psi2 * dot(y1, df1) - phi2 * dot(x1, df1));
  double b = c * f1v * f2v * (psi1 * dot(y2, df2) - phi1 * dot(x2, df2));
  VecD out(spec.dim(), 0.0);
  for (int i = 0; i < spec.base_dim(); ++i) out[i] = phi2 * x1[i];
  for (int j = 0; j < spec.fiber_dim(); ++j) out[spec.base_dim() + j] = psi1 * y2[j];
  for (int k = 0; k < spec.dim(); ++k) out[k] += a * grad2[k] - b * grad1[k];
  return out;
}

std::vector<VecD> sample_product(const WarpSpec& spec, int count, std::uint64_t seed,
                                 double margin_frac) {
  std::vector<std::pair<double, double>> box = spec.base().domain;
  box.insert(box.end(), spec.fiber().domain.begin(), spec.fiber().domain.end());
  return sample_box(box, count, seed, margin_frac);
}

}  // namespace warpgeo
