#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "warpgeo/connection.hpp"
#include "warpgeo/oracle.hpp"

using namespace warpgeo;

namespace {

WarpSpec line_spec(Variant v, double c) {
  Chart base = euclidean_chart(1);
  Chart fiber = euclidean_chart(1, "y");
  return WarpSpec::make(v, ScalarField::on(base, "x1"), ScalarField::on(fiber, "y1"), c);
}

WarpSpec plane_spec(Variant v, double c, const char* f1 = "x1", const char* f2 = "y1") {
  Chart base = euclidean_chart(2).with_domain({{0.5, 4.0}, {-2.0, 2.0}});
  Chart fiber = euclidean_chart(2, "y").with_domain({{0.5, 4.0}, {-2.0, 2.0}});
  return WarpSpec::make(v, ScalarField::on(base, f1), ScalarField::on(fiber, f2), c);
}

WarpSpec curved_spec(double c) {
  Chart base = euclidean_chart(2);
  Chart fiber = halfplane2_chart().with_domain({{-1.0, 1.0}, {1.0, 3.0}});
  return WarpSpec::make(Variant::G, ScalarField::on(base, "2 + sin(x1)*cos(x2)"),
                        ScalarField::on(fiber, "2 + x/6"), c);
}

// value of a lifted field as a product vector at a product point
VecD prod_val(const WarpSpec& spec, const LiftedField& f, const VecD& q) {
  auto [p1, p2] = spec.split(q);
  if (f.side == Side::Base) return lift_base(spec, f.value(p1));
  return lift_fiber(spec, f.value(p2));
}

// bracket of two lifted fields, zero across factors
VecD lifted_bracket(const WarpSpec& spec, const LiftedField& x, const LiftedField& y,
                    const VecD& q) {
  int n = spec.dim();
  if (x.side != y.side) return VecD(n, 0.0);
  auto [p1, p2] = spec.split(q);
  const VecD& p = x.side == Side::Base ? p1 : p2;
  VecD xv = x.value(p), yv = y.value(p);
  MatD jx = x.jacobian(p), jy = y.jacobian(p);
  int m = static_cast<int>(xv.size());
  VecD br(m, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) br[i] += xv[j] * jy(i, j) - yv[j] * jx(i, j);
  return x.side == Side::Base ? lift_base(spec, br) : lift_fiber(spec, br);
}

}  // namespace

TEST_CASE("gradients of the lifted warping functions, closed cases") {
  // no coupling: the classical doubly warped gradient
  WarpSpec s0 = plane_spec(Variant::G, 0.0, "x1 + x2^2/8", "2 + y1/4");
  VecD q = {1.5, 0.8, 2.0, -0.3};
  VecD g = grad_lift_warp(s0, Side::Base, q);
  double f2 = 2.5;
  CHECK(g[0] == doctest::Approx(1.0 / (f2 * f2)).epsilon(1e-14));
  CHECK(g[1] == doctest::Approx(0.2 / (f2 * f2)).epsilon(1e-14));
  CHECK(g[2] == 0.0);
  CHECK(g[3] == 0.0);

  // the worked 1D x 1D point: raise d(f1 lift) with the cometric
  WarpSpec s = line_spec(Variant::G, 0.5);
  VecD gw = grad_lift_warp(s, Side::Base, {2.0, 3.0});
  CHECK(gw[0] == doctest::Approx(4.0 / 27.0).epsilon(1e-13));
  CHECK(gw[1] == doctest::Approx(-1.0 / 9.0).epsilon(1e-13));

  // the uncoupled-side gradient has no base component at all
  WarpSpec h = plane_spec(Variant::H, 1.0);
  VecD gh2 = grad_lift_warp(h, Side::Fiber, {2.0, 0.0, 3.0, 0.0});
  CHECK(gh2[0] == 0.0);
  CHECK(gh2[1] == 0.0);
  CHECK(gh2[2] == 0.25);
  CHECK(gh2[3] == 0.0);
  VecD gh1 = grad_lift_warp(h, Side::Base, {2.0, 0.0, 3.0, 0.0});
  CHECK(gh1[0] == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(gh1[1] == 0.0);
  CHECK(gh1[2] == 0.0);
  CHECK(gh1[3] == 0.0);

  CHECK_THROWS_AS(grad_lift_warp(line_spec(Variant::G, 1.0), Side::Base, {2.0, 3.0}),
                  DegenerateError);
}

TEST_CASE("lifted gradient of a general field") {
  WarpSpec s = plane_spec(Variant::G, 0.35);
  VecD q = {1.5, 0.4, 2.5, -0.7};

  // the warping function itself is just a special case
  VecD a = grad_lift(s, Side::Base, s.f1, q);
  VecD b = grad_lift_warp(s, Side::Base, q);
  for (int i = 0; i < 4; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-14));

  // a field with gradient orthogonal to grad f1 picks up no fiber part
  ScalarField perp = ScalarField::on(s.base(), "x2");
  VecD gp = grad_lift(s, Side::Base, perp, q);
  double f2 = 2.5;
  CHECK(gp[0] == 0.0);
  CHECK(gp[1] == doctest::Approx(1.0 / (f2 * f2)).epsilon(1e-14));
  CHECK(gp[2] == 0.0);
  CHECK(gp[3] == 0.0);
}

TEST_CASE("lifted gradients raise the lifted differential") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> un(-1.0, 1.0);
  WarpSpec specs[] = {plane_spec(Variant::G, 0.35), plane_spec(Variant::H, 0.8),
                      curved_spec(0.3)};
  const char* base_fields[] = {"x1^2/6 + x2", "sin(x1) + 1"};
  for (const WarpSpec& s : specs) {
    for (const VecD& q : sample_product(s, 8, 21, 0.02)) {
      for (const char* src : base_fields) {
        ScalarField phi = ScalarField::on(s.base(), src);
        VecD g = grad_lift(s, Side::Base, phi, q);
        // cometric times the lifted differential
        auto [p1, p2] = s.split(q);
        Jet2 j = phi.jet2(p1);
        VecD dphi(s.dim(), 0.0);
        for (int i = 0; i < s.base_dim(); ++i) dphi[i] = j.grad[i];
        MatD ginv = cometric(s, q);
        for (int i = 0; i < s.dim(); ++i) {
          double want = 0.0;
          for (int k = 0; k < s.dim(); ++k) want += ginv(i, k) * dphi[k];
          CHECK(std::abs(g[i] - want) < 1e-10);
        }
        // defining property against random directions
        MatD gm = assemble(s, q);
        for (int t = 0; t < 20; ++t) {
          VecD v(s.dim());
          for (double& x : v) x = un(rng);
          double lhs = inner(gm, g, v);
          double rhs = dot(dphi, v);
          CHECK(std::abs(lhs - rhs) < 1e-9);
        }
      }
      // fiber side too
      ScalarField psi = ScalarField::on(s.fiber(), s.fiber().coords[0]);
      VecD gf = grad_lift(s, Side::Fiber, psi, q);
      MatD gm = assemble(s, q);
      VecD dpsi(s.dim(), 0.0);
      auto [p1, p2] = s.split(q);
      Jet2 j = psi.jet2(p2);
      for (int i = 0; i < s.fiber_dim(); ++i) dpsi[s.base_dim() + i] = j.grad[i];
      for (int t = 0; t < 20; ++t) {
        VecD v(s.dim());
        for (double& x : v) x = un(rng);
        CHECK(std::abs(inner(gm, gf, v) - dot(dpsi, v)) < 1e-9);
      }
    }
  }
}

TEST_CASE("the B tensor") {
  WarpSpec s = plane_spec(Variant::G, 0.0);
  VecD q = {1.5, 0.4, 2.5, -0.7};
  VecD x = {0.7, -0.2}, y = {1.1, 0.5};
  // without coupling only the metric term survives
  MatD g1 = s.base().metric_at({1.5, 0.4});
  CHECK(b_tensor(s, Side::Base, x, y, q) ==
        doctest::Approx(-inner(g1, x, y)).epsilon(1e-14));

  // linear warp on a flat chart: Hessian term drops, X(f)Y(f) stays
  WarpSpec sc = plane_spec(Variant::G, 0.35);
  VecD gradf1 = {1.0, 0.0};  // f1 = x1, b1 = 1
  double b1 = 1.0;
  CHECK(b_tensor(sc, Side::Base, gradf1, gradf1, q) ==
        doctest::Approx(0.35 * b1 * b1 - b1).epsilon(1e-14));

  // symmetric in its two slots
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> un(-1.0, 1.0);
  WarpSpec cs = curved_spec(0.3);
  for (const VecD& p : sample_product(cs, 5, 23, 0.02)) {
    for (int t = 0; t < 5; ++t) {
      VecD a = {un(rng), un(rng)}, b = {un(rng), un(rng)};
      CHECK(b_tensor(cs, Side::Fiber, a, b, p) ==
            doctest::Approx(b_tensor(cs, Side::Fiber, b, a, p)).epsilon(1e-12));
    }
  }
}

TEST_CASE("covariant derivatives of lifted coordinate fields match the oracle") {
  WarpSpec specs[] = {line_spec(Variant::G, 0.5), plane_spec(Variant::G, 0.35),
                      plane_spec(Variant::H, 1.0), curved_spec(0.3),
                      plane_spec(Variant::G, 0.0)};
  for (const WarpSpec& s : specs) {
    MetricField mf = product_metric_field(s);
    int m1 = s.base_dim(), n = s.dim();
    for (const VecD& q : sample_product(s, 12, 31, 0.02)) {
      Tens3 gam = christoffel(mf, q);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          LiftedField x = a < m1 ? LiftedField::coordinate(s, Side::Base, a)
                                 : LiftedField::coordinate(s, Side::Fiber, a - m1);
          LiftedField y = b < m1 ? LiftedField::coordinate(s, Side::Base, b)
                                 : LiftedField::coordinate(s, Side::Fiber, b - m1);
          VecD nab = nabla_lifted(s, x, y, q);
          for (int l = 0; l < n; ++l) CHECK(std::abs(nab[l] - gam(l, a, b)) < 1e-6);
        }
    }
  }
}

TEST_CASE("mixed derivatives are order-independent") {
  WarpSpec s = plane_spec(Variant::G, 0.35);
  LiftedField x1 = LiftedField::on(s, Side::Base, {"x1*x2", "1 + x2^2"});
  LiftedField y2 = LiftedField::on(s, Side::Fiber, {"y2", "y1/2"});
  for (const VecD& q : sample_product(s, 8, 37, 0.02)) {
    VecD a = nabla_lifted(s, x1, y2, q);
    VecD b = nabla_lifted(s, y2, x1, q);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-12);
  }
}

TEST_CASE("the connection is torsion free") {
  WarpSpec specs[] = {plane_spec(Variant::G, 0.35), plane_spec(Variant::H, 0.8),
                      curved_spec(0.3)};
  for (const WarpSpec& s : specs) {
    const auto& bc = s.base().coords;
    const auto& fc = s.fiber().coords;
    LiftedField fields[] = {
        LiftedField::on(s, Side::Base, {bc[0] + "*" + bc[1], "1 + " + bc[1] + "^2"}),
        LiftedField::on(s, Side::Base, {"sin(" + bc[0] + ")", bc[0] + " - " + bc[1]}),
        LiftedField::on(s, Side::Fiber, {fc[1], fc[0] + "/2"}),
        LiftedField::on(s, Side::Fiber, {fc[0] + "*" + fc[1], "cos(" + fc[1] + ")"}),
    };
    for (const VecD& q : sample_product(s, 6, 41, 0.02)) {
      for (const LiftedField& x : fields)
        for (const LiftedField& y : fields) {
          VecD lhs = nabla_lifted(s, x, y, q);
          VecD rhs = nabla_lifted(s, y, x, q);
          VecD br = lifted_bracket(s, x, y, q);
          for (std::size_t i = 0; i < lhs.size(); ++i)
            CHECK(std::abs(lhs[i] - rhs[i] - br[i]) < 1e-8);
        }
    }
  }
}

TEST_CASE("the connection is metric compatible") {
  WarpSpec specs[] = {plane_spec(Variant::G, 0.35), plane_spec(Variant::H, 0.8)};
  for (const WarpSpec& s : specs) {
    LiftedField x = LiftedField::on(s, Side::Base, {"x1*x2", "1 + x2^2"});
    LiftedField y = LiftedField::on(s, Side::Fiber, {"y2", "y1/2"});
    LiftedField z = LiftedField::on(s, Side::Base, {"sin(x1)", "x1 - x2"});
    for (const VecD& q : sample_product(s, 8, 43, 0.02)) {
      VecD xv = prod_val(s, x, q);
      double t = 1e-5;
      VecD qp = q, qm = q;
      for (std::size_t i = 0; i < q.size(); ++i) {
        qp[i] += t * xv[i];
        qm[i] -= t * xv[i];
      }
      double ip = inner(assemble(s, qp), prod_val(s, y, qp), prod_val(s, z, qp));
      double im = inner(assemble(s, qm), prod_val(s, y, qm), prod_val(s, z, qm));
      double lhs = (ip - im) / (2.0 * t);
      MatD g = assemble(s, q);
      double rhs = inner(g, nabla_lifted(s, x, y, q), prod_val(s, z, q)) +
                   inner(g, prod_val(s, y, q), nabla_lifted(s, x, z, q));
      CHECK(std::abs(lhs - rhs) < 1e-6);
    }
  }
}

TEST_CASE("product-manifold limit of the covariant derivative") {
  Chart base = euclidean_chart(2).with_domain({{0.5, 4.0}, {-2.0, 2.0}});
  Chart fiber = euclidean_chart(2, "y").with_domain({{0.5, 4.0}, {-2.0, 2.0}});
  WarpSpec s = WarpSpec::make(Variant::G, ScalarField::on(base, "1"),
                              ScalarField::on(fiber, "1"), 0.0);
  LiftedField x = LiftedField::on(s, Side::Base, {"x2", "-x1"});
  LiftedField y = LiftedField::on(s, Side::Base, {"x1^2", "0"});
  VecD q = {2.0, 1.0, 2.0, 1.0};
  // flat factor: nabla reduces to the directional derivative of y along x
  VecD nab = nabla_lifted(s, x, y, q);
  CHECK(nab[0] == doctest::Approx(1.0 * 2.0 * 2.0).epsilon(1e-13));  // x^1 d1 y^1
  CHECK(nab[1] == 0.0);
  CHECK(nab[2] == 0.0);
  CHECK(nab[3] == 0.0);

  // mixed derivative vanishes entirely in the product limit
  LiftedField v = LiftedField::on(s, Side::Fiber, {"y1", "y2"});
  VecD mixed = nabla_lifted(s, x, v, q);
  for (double c : mixed) CHECK(c == 0.0);
}
