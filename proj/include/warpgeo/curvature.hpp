#pragma once

// Closed-form curvature of the variant H metric under parallel factor
// gradients (vanishing covariant Hessians of f1 and f2), plus the scalar
// curvature shortcut for constant-curvature factors.  Variant G curvature
// has no closed form here and is served by the coordinate oracle alone.

#include "warpgeo/connection.hpp"
#include "warpgeo/oracle.hpp"

namespace warpgeo {

// a tangent vector on one factor, to be lifted
struct FactorVec {
  Side side = Side::Base;
  VecD v;
};

// (x wedge y)z = g(y,z)x - g(x,z)y
VecD wedge(const MatD& g, const VecD& x, const VecD& y, const VecD& z);

// throws HypothesisError when either covariant Hessian exceeds 1e-8 in
// absolute value
void check_parallel_hypothesis(const WarpSpec& spec, const VecD& q);

// R(X,Y)Z as a product vector, variant H, with u = 1 + (c f2)^2 b1 and
// (X wedge Y)Z = g(Y,Z)X - g(X,Z)Y on the relevant factor:
//   R(X1,Y1)Z1 = lift of R1(X1,Y1)Z1                       (base,base,base)
//   R(X1,Y1)Z2 = 0                                          (base,base,fiber)
//   R(X2,Y2)Z2 = lift R2(X2,Y2)Z2 - b1/u lift (X2^Y2)Z2
//                + c^2 f1 f2 b1/u^2 [((X2^Y2)Z2)(f2)] lift grad f1
//   R(X2,Y2)Z1 = c^2 f2 b1 Z1(f1)/(f1 u) lift (X2^Y2)grad f2
//   R(X1,Y2)Z1 = c^2 X1(ln f1) Z1(ln f1) Y2(f2)/u lift grad f2
//   R(X1,Y2)Z2 = c^2 X1(ln f1)/u [ f2 b1 lift (grad f2 ^ Y2)Z2
//                                  - f1 Y2(f2) Z2(f2)/u lift grad f1 ]
// remaining orders follow from antisymmetry in (X,Y)
VecD riemann_closed(const WarpSpec& spec, const FactorVec& x, const FactorVec& y,
                    const FactorVec& z, const VecD& q);

// the trace of riemann_closed over an orthonormal frame:
//   Ric(X1,Y1) = Ric1(X1,Y1) - c^2 b2/u X1(ln f1) Y1(ln f1)
//   Ric(X1,Y2) = c^2 (m2-1) b1 f2/u X1(ln f1) Y2(f2)
//   Ric(X2,Y2) = Ric2(X2,Y2) - c^2 b1/u^2 X2(f2) Y2(f2) - (m2-1) b1/u g2(X2,Y2)
double ricci_closed(const WarpSpec& spec, const FactorVec& x, const FactorVec& y,
                    const VecD& q);

// S = S1 + S2/f1^2 - m2 (m2-1) b1 / (f1^2 u) - 2 c^2 b1 b2 / (f1^2 u^2)
double scalar_closed(const WarpSpec& spec, const VecD& q);

// scalar curvature when both factors have constant sectional curvature:
//   S = m1 (m1-1) k1 + m2 (m2-1)/f1^2 (k2 - b1/u) - 2 c^2 b1 b2/(f1^2 u^2)
// with u = 1 + (c f2)^2 b1.  b2 defaults to zero, which is forced whenever
// k2 != 0: a nonzero parallel gradient cannot exist on a nonflat
// constant-curvature fiber
double scalar_constant_curvature(int m1, double k1, int m2, double k2, double f1v,
                                 double f2v, double c, double b1, double b2 = 0.0);

// closed form against the coordinate oracle over every coordinate-lift
// combination at one point
struct CurvatureReport {
  double riemann_diff = 0;  // worst component difference over all triples
  double ricci_diff = 0;
  double scalar_closed_v = 0;
  double scalar_oracle_v = 0;
  double scalar_diff = 0;
  double worst = 0;
};

CurvatureReport curvature_report(const WarpSpec& spec, const VecD& q,
                                 const OracleOptions& opt = {});

}  // namespace warpgeo
