#pragma once

// Coordinate charts: named coordinates, an open box domain, and symmetric
// metric entries given as expressions in those coordinates.  A small catalog
// covers flat boxes, the round 2-sphere and the hyperbolic half-plane;
// anything else can be built from explicit entries.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "warpgeo/expr.hpp"
#include "warpgeo/linalg.hpp"
#include "warpgeo/oracle.hpp"

namespace warpgeo {

struct Chart {
  std::string name;
  std::vector<std::string> coords;
  std::vector<std::pair<double, double>> domain;  // open intervals per coordinate
  std::vector<Expression> entries;                // row-major dim x dim, symmetric

  int dim() const { return static_cast<int>(coords.size()); }

  const Expression& entry(int i, int j) const { return entries[i * dim() + j]; }

  bool in_domain(const VecD& p) const;
  void require_in_domain(const VecD& p) const;  // throws DomainError

  // metric value; throws NumericError (with the smallest eigenvalue in the
  // message) if the evaluated matrix is not positive definite
  MatD metric_at(const VecD& p) const;

  template <class S>
  Mat<S> metric_eval(std::span<const S> x) const {
    int n = dim();
    Mat<S> g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        S v = entry(i, j).eval<S>(x);
        g(i, j) = v;
        if (i != j) g(j, i) = v;
      }
    return g;
  }

  MetricJets1 metric_jets1(const VecD& p) const;
  MetricJets2 metric_jets2(const VecD& p) const;

  // adapter handing this chart's metric to the coordinate oracle
  MetricField metric_field(bool fd = false) const;

  Chart with_domain(std::vector<std::pair<double, double>> box) const;
};

Chart euclidean_chart(int n, const std::string& prefix = "x");
Chart sphere2_chart();
Chart halfplane2_chart();

// entries: the dim*dim row-major upper triangle sources may be empty strings,
// which mean zero; lower-triangle strings must be empty (filled by symmetry)
Chart custom_chart(const std::string& name, std::vector<std::string> coords,
                   std::vector<std::pair<double, double>> domain,
                   const std::vector<std::string>& entry_sources);

// "euclidean:N" (optionally "euclidean:N:prefix"), "sphere2", "halfplane2"
Chart chart_from_catalog(const std::string& id);
std::vector<std::string> catalog_ids();

// scalar function on a chart, defined by an expression in its coordinates
struct ScalarField {
  Chart chart;
  Expression expr;

  static ScalarField on(const Chart& chart, std::string_view source);

  double value(const VecD& p) const { return expr.value(p); }
  Jet2 jet2(const VecD& p) const { return expr.jet2(p); }
};

// (grad f)^i = g^{ij} d_j f
VecD grad_vec(const ScalarField& f, const VecD& p);

// b = g(grad f, grad f)
double grad_norm_sq(const ScalarField& f, const VecD& p);

// H^f_{ij} = d_i d_j f - Gamma^k_{ij} d_k f
MatD covariant_hessian(const ScalarField& f, const VecD& p);

// partial derivatives of b(p) = g(grad f, grad f), analytic:
//   d_a b = (d_a g^{kl}) d_k f d_l f + 2 g^{kl} (d_a d_k f) d_l f
VecD grad_b_partials(const ScalarField& f, const VecD& p);

// (grad f)(b), the derivative of b along grad f
double grad_f_of_b(const ScalarField& f, const VecD& p);

// deterministic low-discrepancy points in a box, strictly inside a margin of
// margin_frac * width on every face; identical across runs and platforms
std::vector<VecD> sample_box(const std::vector<std::pair<double, double>>& box,
                             int count, std::uint64_t seed, double margin_frac);

}  // namespace warpgeo
