#pragma once

// Adapted orthonormal frames on the product and the telescoping sum
// identities their construction satisfies.
//
// One factor carries the interesting data: for variant G it is the fiber
// (a_j = e_j(f2)), for variant H the base (a_i = e_i(f1)); e is the
// Gram-Schmidt frame of that factor.  With A_k the prefix sums of a^2 the
// unnormalized vectors on that side are
//   G: u'_j = -c a_j/(f2 (1-c^2 b1 A_j)) grad f1 (+) e_j/f1 + c^2 b1 a_j/(f1 (1-c^2 b1 A_j)) T_j
//      |u'_j|^2 = (1 - c^2 b1 A_{j+1}) / (1 - c^2 b1 A_j)
//   H: u'_i = (e_i - (c f2)^2 a_i/(1+(c f2)^2 A_i) T_i) (+) 0
//      |u'_i|^2 = (1 + (c f2)^2 A_{i+1}) / (1 + (c f2)^2 A_i)
// with T_k = sum_{r<k} a_r e_r; the other factor contributes e_k/f2 (G)
// resp. e_k/f1 (H), which are already unit.

#include "warpgeo/metric.hpp"

namespace warpgeo {

struct FrameData {
  std::vector<VecD> vectors;    // dim() orthonormal product vectors, base block first
  VecD a;                       // a_k on the factor carrying the construction
  VecD partial_sums;            // A_0 = 0 .. A_k (one more entry than a)
  std::vector<VecD> t_vectors;  // T_k as factor vectors, same count as a
  VecD norms_sq;                // |u'|^2 per product index (1 where already unit)
};

// Gram-Schmidt frame of the coordinate basis under the chart metric at p
std::vector<VecD> factor_orthonormal_frame(const Chart& chart, const VecD& p);

// errors with DegenerateError when some 1 - c^2 b1 A_k drops below 1e-8
FrameData product_frame(const WarpSpec& spec, const VecD& q);

// largest absolute residual over all applicable sum identities at q
double sum_identities_residual(const WarpSpec& spec, const VecD& q);

}  // namespace warpgeo
