#pragma once

// Levi-Civita connection data of the product metrics: gradients of lifted
// functions and covariant derivatives of lifted vector fields, all in closed
// form.  Factor-level Christoffel symbols come from the coordinate oracle
// applied to the factor charts.

#include "warpgeo/metric.hpp"

namespace warpgeo {

enum class Side { Base, Fiber };

// a vector field on one factor, lifted to the product; components are
// expressions in that factor's coordinates
struct LiftedField {
  Side side = Side::Base;
  std::vector<Expression> comps;

  static LiftedField on(const WarpSpec& spec, Side side,
                        const std::vector<std::string>& sources);
  // the k-th coordinate field of the factor
  static LiftedField coordinate(const WarpSpec& spec, Side side, int k);

  VecD value(const VecD& factor_point) const;
  MatD jacobian(const VecD& factor_point) const;  // (i,j) = d_j Y^i
};

// gradient of the lifted warping function f1 (side Base) or f2 (side Fiber),
// as a product vector.
//   variant G:  grad(lift f1) = 1/(1-c^2 b1 b2) [ (grad f1)/f2^2 (+) -c b1/(f1 f2) grad f2 ]
//               and symmetrically for f2; errors at degenerate points
//   variant H:  grad(lift f1) = (grad f1)/(1 + (c f2)^2 b1) (+) 0
//               grad(lift f2) = 0 (+) (grad f2)/f1^2
VecD grad_lift_warp(const WarpSpec& spec, Side side, const VecD& q);

// gradient of an arbitrary lifted function phi on the given factor.
//   variant G, base:  (grad phi)/f2^2 (+) 0 - c f1 g1(grad phi, grad f1)/f2 * grad(lift f2)
//   variant G, fiber: 0 (+) (grad phi)/f1^2 - c f2 g2(grad phi, grad f2)/f1 * grad(lift f1)
//   variant H, base:  (grad phi - c^2 f2^2 g1(grad phi, grad f1)/(1+(c f2)^2 b1) grad f1) (+) 0
//   variant H, fiber: 0 (+) (grad phi)/f1^2
VecD grad_lift(const WarpSpec& spec, Side side, const ScalarField& phi, const VecD& q);

// B_f(X,Y) = c f H^f(X,Y) + c X(f) Y(f) - g(X,Y) on the factor carrying f
double b_tensor(const WarpSpec& spec, Side side, const VecD& xv, const VecD& yv,
                const VecD& q);

// nabla_X Y for lifted fields, as a product vector at q.  mixed pairs give
// the same value in either order (the lifts commute and the connection is
// torsion free)
VecD nabla_lifted(const WarpSpec& spec, const LiftedField& x, const LiftedField& y,
                  const VecD& q);

}  // namespace warpgeo
