#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "warpgeo/frame.hpp"

using namespace warpgeo;

namespace {

constexpr double kPi = 3.14159265358979323846;

WarpSpec line_spec(Variant v, double c) {
  Chart base = euclidean_chart(1);
  Chart fiber = euclidean_chart(1, "y");
  return WarpSpec::make(v, ScalarField::on(base, "x1"), ScalarField::on(fiber, "y1"), c);
}

std::vector<WarpSpec> frame_population() {
  Chart e1 = euclidean_chart(1);
  Chart e2 = euclidean_chart(2);
  Chart e2y = euclidean_chart(2, "y");
  Chart e3y = euclidean_chart(3, "y");
  Chart h2 = halfplane2_chart().with_domain({{-1.0, 1.0}, {1.0, 3.0}});
  std::vector<WarpSpec> pop;
  pop.push_back(line_spec(Variant::G, 0.5));
  pop.push_back(WarpSpec::make(Variant::G, ScalarField::on(e2, "2 + sin(x1)*cos(x2)"),
                               ScalarField::on(e2y, "1 + y1^2/20 + y2/10"), 0.4));
  pop.push_back(WarpSpec::make(Variant::G, ScalarField::on(e1, "1 + x1/4"),
                               ScalarField::on(h2, "2 + x/6"), 0.3));
  pop.push_back(WarpSpec::make(Variant::G, ScalarField::on(e2, "x1 + x2^2/8"),
                               ScalarField::on(e3y, "2 + y1/3 + y2*y3/10"), 0.2));
  pop.push_back(WarpSpec::make(Variant::H, ScalarField::on(e2, "x1 + 0.25*x2"),
                               ScalarField::on(e2y, "y1"), 0.8));
  pop.push_back(WarpSpec::make(Variant::H, ScalarField::on(e2, "2 + sin(x1)"),
                               ScalarField::on(e3y, "1 + y2^2/10"), 1.5));
  return pop;
}

}  // namespace

TEST_CASE("factor frames from Gram-Schmidt in coordinate order") {
  Chart e3 = euclidean_chart(3);
  auto fe = factor_orthonormal_frame(e3, {1.0, 2.0, 3.0});
  REQUIRE(fe.size() == 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(fe[i][j] == (i == j ? 1.0 : 0.0));

  auto fh = factor_orthonormal_frame(halfplane2_chart(), {0.0, 2.0});
  CHECK(fh[0][0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(fh[0][1] == 0.0);
  CHECK(fh[1][0] == 0.0);
  CHECK(fh[1][1] == doctest::Approx(2.0).epsilon(1e-14));

  auto fs = factor_orthonormal_frame(sphere2_chart(), {kPi / 2, 0.0});
  CHECK(fs[0][0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(fs[1][1] == doctest::Approx(1.0).epsilon(1e-13));

  // non-diagonal metric: orthonormality is the contract
  Chart skew = custom_chart("skew", {"u", "v"}, {{-1.0, 1.0}, {-1.0, 1.0}},
                            {"2", "0.5 + u/4", "", "3 + v^2"});
  for (const VecD& p : sample_box(skew.domain, 10, 3, 0.01)) {
    auto f = factor_orthonormal_frame(skew, p);
    MatD g = skew.metric_at(p);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        CHECK(std::abs(inner(g, f[i], f[j]) - (i == j ? 1.0 : 0.0)) < 1e-12);
    // first vector keeps the coordinate direction
    CHECK(f[0][1] == 0.0);
  }
}

TEST_CASE("the worked product frame") {
  WarpSpec s = line_spec(Variant::G, 0.5);
  VecD q = {2.0, 3.0};
  FrameData fd = product_frame(s, q);
  REQUIRE(fd.vectors.size() == 2);

  // base vector: e1 lifted and scaled by 1/f2
  CHECK(fd.vectors[0][0] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(fd.vectors[0][1] == 0.0);
  CHECK(fd.norms_sq[0] == 1.0);

  // fiber vector before normalization: (-1/6, 1/2) with squared norm 3/4
  CHECK(fd.norms_sq[1] == doctest::Approx(0.75).epsilon(1e-13));
  double r = std::sqrt(0.75);
  CHECK(fd.vectors[1][0] == doctest::Approx(-1.0 / 6.0 / r).epsilon(1e-13));
  CHECK(fd.vectors[1][1] == doctest::Approx(0.5 / r).epsilon(1e-13));

  // construction bookkeeping: one a value, prefix sums 0 .. b2
  REQUIRE(fd.a.size() == 1);
  CHECK(fd.a[0] == doctest::Approx(1.0).epsilon(1e-14));
  REQUIRE(fd.partial_sums.size() == 2);
  CHECK(fd.partial_sums[0] == 0.0);
  CHECK(fd.partial_sums[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("uncoupled frames are the scaled factor frames") {
  Chart e2 = euclidean_chart(2);
  Chart e2y = euclidean_chart(2, "y");
  WarpSpec s = WarpSpec::make(Variant::G, ScalarField::on(e2, "x1"),
                              ScalarField::on(e2y, "1 + y1/4"), 0.0);
  VecD q = {2.0, 1.0, 2.0, 1.0};
  double f1 = 2.0, f2 = 1.5;
  FrameData fd = product_frame(s, q);
  for (int k = 0; k < 2; ++k) {
    CHECK(fd.vectors[k][k] == doctest::Approx(1.0 / f2).epsilon(1e-14));
    CHECK(fd.vectors[2 + k][2 + k] == doctest::Approx(1.0 / f1).epsilon(1e-14));
    CHECK(fd.norms_sq[k] == 1.0);
    CHECK(fd.norms_sq[2 + k] == 1.0);
  }
  CHECK(sum_identities_residual(s, q) < 1e-15);
}

TEST_CASE("orthonormality under the assembled metric") {
  for (const WarpSpec& s : frame_population()) {
    for (const VecD& q : sample_product(s, 20, 19, 0.02)) {
      FrameData fd = product_frame(s, q);
      MatD g = assemble(s, q);
      int n = s.dim();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          CHECK(std::abs(inner(g, fd.vectors[i], fd.vectors[j]) - (i == j ? 1.0 : 0.0)) <
                1e-10);
    }
  }
}

TEST_CASE("stored norms reproduce the ratio displays") {
  for (const WarpSpec& s : frame_population()) {
    for (const VecD& q : sample_product(s, 12, 29, 0.02)) {
      FrameData fd = product_frame(s, q);
      auto [p1, p2] = s.split(q);
      int m1 = s.base_dim(), m2 = s.fiber_dim();
      double c = s.c;
      if (s.variant == Variant::G) {
        double b1 = grad_norm_sq(s.f1, p1);
        for (int j = 0; j < m2; ++j) {
          double want = (1.0 - c * c * b1 * fd.partial_sums[j + 1]) /
                        (1.0 - c * c * b1 * fd.partial_sums[j]);
          CHECK(std::abs(fd.norms_sq[m1 + j] - want) < 1e-10);
        }
        for (int k = 0; k < m1; ++k) CHECK(fd.norms_sq[k] == 1.0);
        CHECK(std::abs(fd.partial_sums.back() - grad_norm_sq(s.f2, p2)) < 1e-12);
      } else {
        double f2v = s.f2.value(p2);
        double w = c * c * f2v * f2v;
        for (int i = 0; i < m1; ++i) {
          double want = (1.0 + w * fd.partial_sums[i + 1]) /
                        (1.0 + w * fd.partial_sums[i]);
          CHECK(std::abs(fd.norms_sq[i] - want) < 1e-10);
        }
        for (int j = 0; j < m2; ++j) CHECK(fd.norms_sq[m1 + j] == 1.0);
        CHECK(std::abs(fd.partial_sums.back() - grad_norm_sq(s.f1, p1)) < 1e-12);
      }
      CHECK(fd.partial_sums[0] == 0.0);
    }
  }
}

TEST_CASE("directional derivatives of the lifted warps across the frame") {
  for (const WarpSpec& s : frame_population()) {
    if (s.variant != Variant::G) continue;
    for (const VecD& q : sample_product(s, 10, 47, 0.02)) {
      FrameData fd = product_frame(s, q);
      auto [p1, p2] = s.split(q);
      Jet2 j1 = s.f1.jet2(p1), j2 = s.f2.jet2(p2);
      double f1v = j1.value, f2v = j2.value;
      double b1 = grad_norm_sq(s.f1, p1);
      int m1 = s.base_dim(), m2 = s.fiber_dim();
      for (int j = 0; j < m2; ++j) {
        const VecD& u = fd.vectors[m1 + j];
        double uf1 = 0.0, uf2 = 0.0;
        for (int i = 0; i < m1; ++i) uf1 += u[i] * j1.grad[i];
        for (int i = 0; i < m2; ++i) uf2 += u[m1 + i] * j2.grad[i];
        CHECK(std::abs(uf1 + s.c * f1v * b1 / f2v * uf2) < 1e-10);
      }
      // T bookkeeping: T_j applied to f2 equals A_j equals g2(T_j, T_j)
      MatD g2 = s.fiber().metric_at(p2);
      for (std::size_t k = 0; k < fd.t_vectors.size(); ++k) {
        const VecD& t = fd.t_vectors[k];
        double tf2 = 0.0;
        for (int i = 0; i < m2; ++i) tf2 += t[i] * j2.grad[i];
        CHECK(std::abs(tf2 - fd.partial_sums[k]) < 1e-10);
        CHECK(std::abs(inner(g2, t, t) - fd.partial_sums[k]) < 1e-10);
      }
    }
  }
}

TEST_CASE("base frame vectors of the one-sided coupling see the warp damped") {
  // before normalization, u'_i(f1 lift) collapses to a_i / (1 + (c f2)^2 A_i)
  for (const WarpSpec& s : frame_population()) {
    if (s.variant != Variant::H) continue;
    for (const VecD& q : sample_product(s, 10, 53, 0.02)) {
      FrameData fd = product_frame(s, q);
      auto [p1, p2] = s.split(q);
      Jet2 j1 = s.f1.jet2(p1);
      double f2v = s.f2.value(p2);
      double w = s.c * s.c * f2v * f2v;
      int m1 = s.base_dim();
      for (int i = 0; i < m1; ++i) {
        VecD uprime(m1);
        double scale = std::sqrt(fd.norms_sq[i]);
        for (int k = 0; k < m1; ++k) uprime[k] = fd.vectors[i][k] * scale;
        double uf1 = 0.0;
        for (int k = 0; k < m1; ++k) uf1 += uprime[k] * j1.grad[k];
        CHECK(std::abs(uf1 - fd.a[i] / (1.0 + w * fd.partial_sums[i])) < 1e-10);
      }
    }
  }
}

TEST_CASE("sum identities hold across the population") {
  for (const WarpSpec& s : frame_population()) {
    for (const VecD& q : sample_product(s, 100, 61, 0.02))
      CHECK(sum_identities_residual(s, q) < 1e-10);
  }
}

TEST_CASE("degenerate coupling is rejected") {
  WarpSpec s = line_spec(Variant::G, 1.0);
  CHECK_THROWS_AS(product_frame(s, {2.0, 3.0}), DegenerateError);
  CHECK_THROWS_AS(sum_identities_residual(s, {2.0, 3.0}), DegenerateError);
}
