#include "warpgeo/frame.hpp"

#include <cmath>

namespace warpgeo {

namespace {

constexpr double kFrameGuard = 1e-8;

struct FrameScratch {
  VecD p1, p2;
  double f1v = 0, f2v = 0, b1 = 0, b2 = 0;
  std::vector<VecD> e1, e2;  // factor frames
  VecD up1, up2;             // raised factor gradients
};

FrameScratch frame_scratch(const WarpSpec& spec, const VecD& q) {
  FrameScratch s;
  std::tie(s.p1, s.p2) = spec.split(q);
  s.f1v = spec.f1.value(s.p1);
  s.f2v = spec.f2.value(s.p2);
  s.b1 = grad_norm_sq(spec.f1, s.p1);
  s.b2 = grad_norm_sq(spec.f2, s.p2);
  s.e1 = factor_orthonormal_frame(spec.base(), s.p1);
  s.e2 = factor_orthonormal_frame(spec.fiber(), s.p2);
  s.up1 = grad_vec(spec.f1, s.p1);
  s.up2 = grad_vec(spec.f2, s.p2);
  return s;
}

}  // namespace

std::vector<VecD> factor_orthonormal_frame(const Chart& chart, const VecD& p) {
  int n = chart.dim();
  MatD g = chart.metric_at(p);
  std::vector<VecD> frame;
  for (int i = 0; i < n; ++i) {
    VecD v(n, 0.0);
    v[i] = 1.0;
    for (int k = 0; k < i; ++k) {
      double proj = inner(g, v, frame[k]);
      for (int l = 0; l < n; ++l) v[l] -= proj * frame[k][l];
    }
    double nrm2 = inner(g, v, v);
    if (!(nrm2 > 1e-24)) throw NumericError("factor frame collapsed during orthogonalization");
    double inv = 1.0 / std::sqrt(nrm2);
    for (int l = 0; l < n; ++l) v[l] *= inv;
    frame.push_back(std::move(v));
  }
  return frame;
}

FrameData product_frame(const WarpSpec& spec, const VecD& q) {
  FrameScratch s = frame_scratch(spec, q);
  int m1 = spec.base_dim(), m2 = spec.fiber_dim();
  double c = spec.c;
  FrameData out;
  out.vectors.assign(m1 + m2, VecD(m1 + m2, 0.0));
  out.norms_sq.assign(m1 + m2, 1.0);

  if (spec.variant == Variant::G) {
    int k = m2;  // construction runs over the fiber
    out.a.resize(k);
    for (int r = 0; r < k; ++r) {
      VecD df2 = spec.f2.expr.gradient(s.p2);
      out.a[r] = dot(s.e2[r], df2);
    }
    out.partial_sums.assign(k + 1, 0.0);
    for (int r = 0; r < k; ++r)
      out.partial_sums[r + 1] = out.partial_sums[r] + out.a[r] * out.a[r];
    out.t_vectors.assign(k, VecD(m2, 0.0));
    for (int r = 1; r < k; ++r) {
      out.t_vectors[r] = out.t_vectors[r - 1];
      for (int l = 0; l < m2; ++l) out.t_vectors[r][l] += out.a[r - 1] * s.e2[r - 1][l];
    }
    for (int r = 0; r <= k; ++r) {
      if (1.0 - c * c * s.b1 * out.partial_sums[r] < kFrameGuard)
        throw DegenerateError("frame construction degenerate: 1 - c^2 b1 A_k below 1e-8",
                              c * c * s.b1 * out.partial_sums[r]);
    }
    for (int i = 0; i < m1; ++i)
      for (int l = 0; l < m1; ++l) out.vectors[i][l] = s.e1[i][l] / s.f2v;
    for (int r = 0; r < k; ++r) {
      double bj = 1.0 - c * c * s.b1 * out.partial_sums[r];
      double n2 = (1.0 - c * c * s.b1 * out.partial_sums[r + 1]) / bj;
      out.norms_sq[m1 + r] = n2;
      VecD u(m1 + m2, 0.0);
      for (int l = 0; l < m1; ++l) u[l] = -c * out.a[r] * s.up1[l] / (s.f2v * bj);
      for (int l = 0; l < m2; ++l)
        u[m1 + l] = s.e2[r][l] / s.f1v +
                    c * c * s.b1 * out.a[r] * out.t_vectors[r][l] / (s.f1v * bj);
      double inv = 1.0 / std::sqrt(n2);
      for (double& v : u) v *= inv;
      out.vectors[m1 + r] = std::move(u);
    }
  } else {
    int k = m1;  // construction runs over the base
    double cf2 = c * s.f2v;
    out.a.resize(k);
    VecD df1 = spec.f1.expr.gradient(s.p1);
    for (int r = 0; r < k; ++r) out.a[r] = dot(s.e1[r], df1);
    out.partial_sums.assign(k + 1, 0.0);
    for (int r = 0; r < k; ++r)
      out.partial_sums[r + 1] = out.partial_sums[r] + out.a[r] * out.a[r];
    out.t_vectors.assign(k, VecD(m1, 0.0));
    for (int r = 1; r < k; ++r) {
      out.t_vectors[r] = out.t_vectors[r - 1];
      for (int l = 0; l < m1; ++l) out.t_vectors[r][l] += out.a[r - 1] * s.e1[r - 1][l];
    }
    for (int r = 0; r < k; ++r) {
      double cr = 1.0 + cf2 * cf2 * out.partial_sums[r];
      double n2 = (1.0 + cf2 * cf2 * out.partial_sums[r + 1]) / cr;
      out.norms_sq[r] = n2;
      VecD u(m1 + m2, 0.0);
      for (int l = 0; l < m1; ++l)
        u[l] = s.e1[r][l] - cf2 * cf2 * out.a[r] * out.t_vectors[r][l] / cr;
      double inv = 1.0 / std::sqrt(n2);
      for (double& v : u) v *= inv;
      out.vectors[r] = std::move(u);
    }
    for (int r = 0; r < m2; ++r)
      for (int l = 0; l < m2; ++l) out.vectors[m1 + r][m1 + l] = s.e2[r][l] / s.f1v;
  }
  return out;
}

double sum_identities_residual(const WarpSpec& spec, const VecD& q) {
  FrameData fr = product_frame(spec, q);
  FrameScratch s = frame_scratch(spec, q);
  int m1 = spec.base_dim(), m2 = spec.fiber_dim();
  double c = spec.c;
  double worst = 0.0;
  auto track = [&worst](double r) { worst = std::max(worst, std::abs(r)); };

  if (spec.variant == Variant::G) {
    double dd = c * c * s.b1 * s.b2;
    auto bk = [&](int k) { return 1.0 - c * c * s.b1 * fr.partial_sums[k]; };
    auto norm2 = [&](int r) { return fr.norms_sq[m1 + r]; };
    // grad f2 / (1-c^2 b1 b2) recovered from the frame pieces, componentwise
    for (int l = 0; l < m2; ++l) {
      double lhs = s.up2[l] / (1.0 - dd);
      double rhs = 0.0;
      for (int r = 0; r < m2; ++r) {
        double coef = fr.a[r] / (std::sqrt(norm2(r)) * bk(r));
        rhs += c * c * s.b1 * coef * coef * fr.t_vectors[r][l];
        rhs += fr.a[r] / (norm2(r) * bk(r)) * s.e2[r][l];
      }
      track(lhs - rhs);
    }
    // b2 / (1-c^2 b1 b2) as the matching scalar sum
    {
      double rhs = 0.0;
      for (int r = 0; r < m2; ++r) {
        double ar2 = fr.a[r] * fr.a[r];
        rhs += c * c * s.b1 * ar2 * fr.partial_sums[r] / (norm2(r) * bk(r) * bk(r));
        rhs += ar2 / (norm2(r) * bk(r));
      }
      track(s.b2 / (1.0 - dd) - rhs);
    }
    // telescoping family 1: 1/B_r + c^2 b1 sum_{i>=r} a_i^2/(B_i B_{i+1}) = 1/(1-c^2 b1 b2)
    for (int r = 0; r < m2; ++r) {
      double sum = 0.0;
      for (int i = r; i < m2; ++i) sum += fr.a[i] * fr.a[i] / (bk(i) * bk(i + 1));
      track(1.0 / bk(r) + c * c * s.b1 * sum - 1.0 / (1.0 - dd));
    }
    // family 2: a ratio that collapses to 1 for consecutive indices
    for (int r = 1; r < m2; ++r) {
      double am = fr.a[r - 1], ar = fr.a[r];
      double num = bk(r + 1) * bk(r - 1) +
                   (c * c * s.b1 * ar * am) * (c * c * s.b1 * ar * am);
      double den = bk(r) * (1.0 - c * c * s.b1 * (fr.partial_sums[r + 1] - am * am));
      track(num / den - 1.0);
    }
    // family 3: 1/|u'_r|^2 plus its tail sum
    for (int r = 0; r < m2; ++r) {
      double sum = 0.0;
      for (int i = r + 1; i < m2; ++i) sum += fr.a[i] * fr.a[i] / (bk(i) * bk(i + 1));
      double lhs = 1.0 / norm2(r) + (c * c * s.b1 * fr.a[r]) * (c * c * s.b1 * fr.a[r]) * sum;
      double rhs = (1.0 - c * c * s.b1 * (s.b2 - fr.a[r] * fr.a[r])) / (1.0 - dd);
      track(lhs - rhs);
    }
  } else {
    double cf2 = c * s.f2v;
    double u = 1.0 + cf2 * cf2 * s.b1;
    auto ck = [&](int k) { return 1.0 + cf2 * cf2 * fr.partial_sums[k]; };
    for (int r = 0; r < m1; ++r) {
      double tail = 0.0;
      for (int i = r + 1; i < m1; ++i) tail += fr.a[i] * fr.a[i] / (ck(i) * ck(i + 1));
      double ar2 = fr.a[r] * fr.a[r];
      track(cf2 * cf2 * cf2 * cf2 * ar2 * tail + ck(r) / ck(r + 1) -
            (1.0 - cf2 * cf2 * ar2 / u));
      track(cf2 * cf2 * tail - 1.0 / ck(r + 1) + 1.0 / u);
    }
  }
  return worst;
}

}  // namespace warpgeo
