#pragma once

// Closed-form Laplacians of lifted functions and the harmonicity defects
// that decide when a lift is harmonic given harmonic factor data.

#include "warpgeo/connection.hpp"
#include "warpgeo/oracle.hpp"

namespace warpgeo {

// Laplacian of the lifted warping function (f1 for Base, f2 for Fiber).
//
// Variant G, base side (the fiber side swaps all roles):
//   Delta(lift f1) = 1/(f2 (1-D)) [ Delta1 f1 / f2 - c b1 Delta2 f2 / f1
//                                   + b1 (c (1-m1) b2 + m2)/(f1 f2) ]
//     + c^2/(2 f2 (1-D)^2) [ b2/f2 (grad f1)(b1) - c b1^2/f1 (grad f2)(b2) ]
//   with D = c^2 b1 b2; errors at degenerate points.
//
// Variant H specializes the general formula below to phi = f1 resp. f2.
double laplacian_lift_warp(const WarpSpec& spec, Side side, const VecD& q);

// variant H only: Laplacian of an arbitrary lifted function, with
// u = 1 + (c f2)^2 b1,
//   Delta(lift phi1) = Delta1 phi1 + m2 (grad f1)(phi1)/(f1 u)
//     - (c f2)^2/u [ (grad f1)(phi1) Delta1 f1 + H^{phi1}(grad f1, grad f1)
//                    - (c f2)^2 (grad f1)(phi1)/u H^{f1}(grad f1, grad f1) ]
//   Delta(lift phi2) = ( Delta2 phi2 + c^2 f2 b1 (grad f2)(phi2)/u ) / f1^2
double laplacian_lift(const WarpSpec& spec, Side side, const ScalarField& phi,
                      const VecD& q);

// variant G under parallel factor gradients (covariant Hessians of f1 and f2
// vanish; checked against 1e-8 and reported through HypothesisError):
//   Delta(lift f1) = ((1-m1) c b1 b2 + m2 b1) / (f1 f2^2 (1-D))
//   Delta(lift f2) = ((1-m2) c b1 b2 + m1 b2) / (f1^2 f2 (1-D))
double laplacian_parallel_gradient(const WarpSpec& spec, Side side, const VecD& q);

// the part of the closed-form Laplacian that survives when both factor
// Laplacians vanish; zero exactly when harmonic factor data lifts to a
// harmonic function.
//   variant G, base side: b1 (c (1-m1) b2 + m2)/(f1 f2)
//     + c^2/(2 (1-D)) [ b2/f2 (grad f1)(b1) - c b1^2/f1 (grad f2)(b2) ]
//   variant H, base side: m2 b1/(f1 u) - (c f2)^2/u (1 - (c f2)^2 b1/u)
//                         * H^{f1}(grad f1, grad f1)
//   variant H, fiber side: c^2 f2 b1 b2 / (f1^2 u)
double harmonicity_defect(const WarpSpec& spec, Side side, const VecD& q);

// oracle-vs-closed-form comparison of both lifted Laplacians at a point.
// phi1/phi2 override the compared functions for variant H; variant G always
// compares the warping function lifts.
struct LaplacianReport {
  double closed_base = 0, oracle_base = 0, diff_base = 0;
  double closed_fiber = 0, oracle_fiber = 0, diff_fiber = 0;
};

LaplacianReport laplacian_report(const WarpSpec& spec, const ScalarField* phi1,
                                 const ScalarField* phi2, const VecD& q,
                                 const OracleOptions& opt = {});

// a factor function lifted to the product, packaged for the oracle
ScalarFn lift_scalar_fn(const WarpSpec& spec, Side side, const ScalarField& phi,
                        bool with_jets);

}  // namespace warpgeo
