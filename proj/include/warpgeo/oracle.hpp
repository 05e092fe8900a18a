#pragma once

// Coordinate-level differential geometry from metric component callbacks
// alone: Christoffel symbols, curvature tensors, Laplace-Beltrami.  This
// module never sees how a metric was assembled, so it can sit on the other
// side of a comparison from any closed-form construction.
//
// Derivatives come either from caller-supplied jets (dual-number backed) or
// from central finite differences when the jet callbacks are absent.

#include <functional>

#include "warpgeo/expr.hpp"
#include "warpgeo/linalg.hpp"

namespace warpgeo {

struct MetricField {
  int dim = 0;
  std::function<MatD(const VecD&)> value;
  // optional analytic jets; when null, finite differences of value are used
  std::function<MetricJets1(const VecD&)> jet1;
  std::function<MetricJets2(const VecD&)> jet2;
};

struct ScalarFn {
  std::function<double(const VecD&)> value;
  std::function<Jet2(const VecD&)> jet2;  // optional, finite differences otherwise
};

struct VectorFn {
  int dim = 0;
  std::function<VecD(const VecD&)> value;
  std::function<MatD(const VecD&)> jacobian;  // (i,j) = d_j Y^i; optional
};

struct OracleOptions {
  bool fd = false;          // force finite differences even when jets exist
  double step_g = 1e-4;     // central step for metric and field derivatives
  double step_gamma = 1e-3; // central step for differentiating Christoffels
};

// Gamma^k_{ij} as gamma(k,i,j)
Tens3 christoffel(const MetricField& mf, const VecD& p, const OracleOptions& opt = {});

// R^l_{kij} as riemann(l,k,i,j), convention
//   R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z
//   R^l_{kij} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik}
//             + Gamma^l_{im} Gamma^m_{jk} - Gamma^l_{jm} Gamma^m_{ik}
// dimension is capped at 8
Tens4 riemann(const MetricField& mf, const VecD& p, const OracleOptions& opt = {});

// Ric_{jk} = sum_i R^i_{kij}; the unit 2-sphere gets scalar curvature +2
MatD ricci(const MetricField& mf, const VecD& p, const OracleOptions& opt = {});
double scalar_curvature(const MetricField& mf, const VecD& p, const OracleOptions& opt = {});

// sectional curvature of span{x,y}
double sectional_curvature(const MetricField& mf, const VecD& p, const VecD& x,
                           const VecD& y, const OracleOptions& opt = {});

// Delta phi = g^ij (d_i d_j phi - Gamma^k_{ij} d_k phi)
double laplace_beltrami(const MetricField& mf, const ScalarFn& phi, const VecD& p,
                        const OracleOptions& opt = {});

// (grad phi)^i = g^ij d_j phi
VecD gradient(const MetricField& mf, const ScalarFn& phi, const VecD& p,
              const OracleOptions& opt = {});

// (nabla_x Y)^b = x^a d_a Y^b + Gamma^b_{ac} x^a Y^c for a vector x at p
VecD covariant_deriv(const MetricField& mf, const VectorFn& y, const VecD& x_at_p,
                     const VecD& p, const OracleOptions& opt = {});

// helpers shared with tests: jets of a callback metric by central differences
MetricJets1 metric_jets1_fd(const MetricField& mf, const VecD& p, double step);
Jet2 scalar_jet2_fd(const std::function<double(const VecD&)>& f, const VecD& p,
                    double step);

}  // namespace warpgeo
