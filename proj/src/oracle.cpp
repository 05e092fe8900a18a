#include "warpgeo/oracle.hpp"

#include <cmath>

namespace warpgeo {

namespace {

constexpr int kMaxCurvatureDim = 8;

void check_dim(const MetricField& mf) {
  if (mf.dim < 1) throw ValidationError("metric field dimension must be positive");
  if (mf.dim > kMaxCurvatureDim)
    throw ValidationError("curvature oracle supports dimension at most 8");
}

Tens3 christoffel_from_jets(const MetricJets1& jets) {
  int n = jets.g.rows;
  MatD ginv = inverse(jets.g);
  Tens3 gamma(n, n, n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l)
          s += ginv(k, l) * (jets.dg(i, j, l) + jets.dg(j, i, l) - jets.dg(l, i, j));
        gamma(k, i, j) = 0.5 * s;
      }
  return gamma;
}

MetricJets1 get_jets1(const MetricField& mf, const VecD& p, const OracleOptions& opt) {
  if (!opt.fd && mf.jet1) return mf.jet1(p);
  return metric_jets1_fd(mf, p, opt.step_g);
}

Jet2 get_scalar_jet2(const ScalarFn& f, const VecD& p, const OracleOptions& opt) {
  if (!opt.fd && f.jet2) return f.jet2(p);
  return scalar_jet2_fd(f.value, p, opt.step_g);
}

MatD jacobian_fd(const VectorFn& y, const VecD& p, double step) {
  int n = static_cast<int>(p.size());
  MatD jac(y.dim, n);
  VecD q = p;
  for (int a = 0; a < n; ++a) {
    q[a] = p[a] + step;
    VecD hi = y.value(q);
    q[a] = p[a] - step;
    VecD lo = y.value(q);
    q[a] = p[a];
    for (int b = 0; b < y.dim; ++b) jac(b, a) = (hi[b] - lo[b]) / (2.0 * step);
  }
  return jac;
}

// d_a Gamma as dgamma(a,k,i,j), analytic from second metric jets:
//   d_a g^{kl} = -g^{km} (d_a g_{mn}) g^{nl}
//   d_a Gamma^k_{ij} = 1/2 d_a g^{kl} (d_i g_{jl} + d_j g_{il} - d_l g_{ij})
//                    + 1/2 g^{kl} (d_a d_i g_{jl} + d_a d_j g_{il} - d_a d_l g_{ij})
Tens4 dgamma_from_jets(const MetricJets2& jets) {
  int n = jets.g.rows;
  MatD ginv = inverse(jets.g);
  Tens3 dginv(n, n, n);
  for (int a = 0; a < n; ++a)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        double s = 0.0;
        for (int m = 0; m < n; ++m)
          for (int q = 0; q < n; ++q) s += ginv(k, m) * jets.dg(a, m, q) * ginv(q, l);
        dginv(a, k, l) = -s;
      }
  Tens4 dg4(n, n, n, n);
  for (int a = 0; a < n; ++a)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int l = 0; l < n; ++l) {
            s += dginv(a, k, l) *
                 (jets.dg(i, j, l) + jets.dg(j, i, l) - jets.dg(l, i, j));
            s += ginv(k, l) *
                 (jets.ddg(a, i, j, l) + jets.ddg(a, j, i, l) - jets.ddg(a, l, i, j));
          }
          dg4(a, k, i, j) = 0.5 * s;
        }
  return dg4;
}

Tens4 dgamma_fd(const MetricField& mf, const VecD& p, const OracleOptions& opt) {
  int n = mf.dim;
  Tens4 dg4(n, n, n, n);
  VecD q = p;
  for (int a = 0; a < n; ++a) {
    q[a] = p[a] + opt.step_gamma;
    Tens3 hi = christoffel(mf, q, opt);
    q[a] = p[a] - opt.step_gamma;
    Tens3 lo = christoffel(mf, q, opt);
    q[a] = p[a];
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          dg4(a, k, i, j) = (hi(k, i, j) - lo(k, i, j)) / (2.0 * opt.step_gamma);
  }
  return dg4;
}

}  // namespace

MetricJets1 metric_jets1_fd(const MetricField& mf, const VecD& p, double step) {
  int n = mf.dim;
  MetricJets1 jets;
  jets.g = mf.value(p);
  jets.dg = Tens3(n, n, n);
  VecD q = p;
  for (int a = 0; a < n; ++a) {
    q[a] = p[a] + step;
    MatD hi = mf.value(q);
    q[a] = p[a] - step;
    MatD lo = mf.value(q);
    q[a] = p[a];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) jets.dg(a, i, j) = (hi(i, j) - lo(i, j)) / (2.0 * step);
  }
  return jets;
}

Jet2 scalar_jet2_fd(const std::function<double(const VecD&)>& f, const VecD& p,
                    double step) {
  int n = static_cast<int>(p.size());
  Jet2 jet;
  jet.value = f(p);
  jet.grad.assign(n, 0.0);
  jet.hess = MatD(n, n);
  VecD q = p;
  for (int i = 0; i < n; ++i) {
    double h = step * std::max(1.0, std::abs(p[i]));
    q[i] = p[i] + h;
    double fp = f(q);
    q[i] = p[i] - h;
    double fm = f(q);
    q[i] = p[i];
    jet.grad[i] = (fp - fm) / (2.0 * h);
    jet.hess(i, i) = (fp - 2.0 * jet.value + fm) / (h * h);
  }
  for (int i = 0; i < n; ++i) {
    double hi = step * std::max(1.0, std::abs(p[i]));
    for (int j = i + 1; j < n; ++j) {
      double hj = step * std::max(1.0, std::abs(p[j]));
      q[i] = p[i] + hi; q[j] = p[j] + hj;
      double fpp = f(q);
      q[j] = p[j] - hj;
      double fpm = f(q);
      q[i] = p[i] - hi; q[j] = p[j] + hj;
      double fmp = f(q);
      q[j] = p[j] - hj;
      double fmm = f(q);
      q[i] = p[i]; q[j] = p[j];
      double v = (fpp - fpm - fmp + fmm) / (4.0 * hi * hj);
      jet.hess(i, j) = v;
      jet.hess(j, i) = v;
    }
  }
  return jet;
}

Tens3 christoffel(const MetricField& mf, const VecD& p, const OracleOptions& opt) {
  if (mf.dim < 1) throw ValidationError("metric field dimension must be positive");
  return christoffel_from_jets(get_jets1(mf, p, opt));
}

Tens4 riemann(const MetricField& mf, const VecD& p, const OracleOptions& opt) {
  check_dim(mf);
  int n = mf.dim;
  Tens3 gamma;
  Tens4 dgamma;
  if (!opt.fd && mf.jet2) {
    MetricJets2 jets = mf.jet2(p);
    gamma = christoffel_from_jets({jets.g, jets.dg});
    dgamma = dgamma_from_jets(jets);
  } else {
    gamma = christoffel(mf, p, opt);
    dgamma = dgamma_fd(mf, p, opt);
  }
  Tens4 r(n, n, n, n);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = dgamma(i, l, j, k) - dgamma(j, l, i, k);
          for (int m = 0; m < n; ++m)
            s += gamma(l, i, m) * gamma(m, j, k) - gamma(l, j, m) * gamma(m, i, k);
          r(l, k, i, j) = s;
        }
  return r;
}

MatD ricci(const MetricField& mf, const VecD& p, const OracleOptions& opt) {
  Tens4 r = riemann(mf, p, opt);
  int n = mf.dim;
  MatD ric(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += r(i, k, i, j);
      ric(j, k) = s;
    }
  return ric;
}

double scalar_curvature(const MetricField& mf, const VecD& p, const OracleOptions& opt) {
  MatD ric = ricci(mf, p, opt);
  MatD ginv = inverse(mf.value(p));
  int n = mf.dim;
  double s = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) s += ginv(j, k) * ric(j, k);
  return s;
}

double sectional_curvature(const MetricField& mf, const VecD& p, const VecD& x,
                           const VecD& y, const OracleOptions& opt) {
  Tens4 r = riemann(mf, p, opt);
  MatD g = mf.value(p);
  int n = mf.dim;
  // numerator g(R(x,y)y, x)
  VecD rxyy(n, 0.0);
  for (int l = 0; l < n; ++l) {
    double s = 0.0;
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += r(l, k, i, j) * y[k] * x[i] * y[j];
    rxyy[l] = s;
  }
  double num = inner(g, rxyy, x);
  double gxx = inner(g, x, x), gyy = inner(g, y, y), gxy = inner(g, x, y);
  double area = gxx * gyy - gxy * gxy;
  if (area <= 0.0) throw NumericError("sectional curvature of a degenerate plane");
  return num / area;
}

double laplace_beltrami(const MetricField& mf, const ScalarFn& phi, const VecD& p,
                        const OracleOptions& opt) {
  MetricJets1 jets = get_jets1(mf, p, opt);
  Tens3 gamma = christoffel_from_jets(jets);
  MatD ginv = inverse(jets.g);
  Jet2 jet = get_scalar_jet2(phi, p, opt);
  int n = mf.dim;
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double term = jet.hess(i, j);
      for (int k = 0; k < n; ++k) term -= gamma(k, i, j) * jet.grad[k];
      s += ginv(i, j) * term;
    }
  return s;
}

VecD gradient(const MetricField& mf, const ScalarFn& phi, const VecD& p,
              const OracleOptions& opt) {
  Jet2 jet = get_scalar_jet2(phi, p, opt);
  LuFactors<double> f = lu_factor(mf.value(p));
  return solve_lu(f, jet.grad);
}

VecD covariant_deriv(const MetricField& mf, const VectorFn& y, const VecD& x_at_p,
                     const VecD& p, const OracleOptions& opt) {
  Tens3 gamma = christoffel(mf, p, opt);
  MatD jac = (!opt.fd && y.jacobian) ? y.jacobian(p) : jacobian_fd(y, p, opt.step_g);
  VecD yv = y.value(p);
  int n = mf.dim;
  VecD out(n, 0.0);
  for (int b = 0; b < n; ++b) {
    double s = 0.0;
    for (int a = 0; a < n; ++a) {
      s += x_at_p[a] * jac(b, a);
      for (int c = 0; c < n; ++c) s += gamma(b, a, c) * x_at_p[a] * yv[c];
    }
    out[b] = s;
  }
  return out;
}

}  // namespace warpgeo
