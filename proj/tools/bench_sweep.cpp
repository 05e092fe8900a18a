// Compares the serial and the OpenMP sweep paths on one synthetic config and
// checks that they produce identical rows.  Optional argument: point count
// (default 300).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "warpgeo/sweep.hpp"

using namespace warpgeo;

namespace {

RunConfig bench_config(int count) {
  RunConfig cfg;
  Chart base = euclidean_chart(2, "x");
  Chart fiber = euclidean_chart(2, "y");
  cfg.spec = WarpSpec::make(Variant::H, ScalarField::on(base, "x1 + 0.25*x2"),
                            ScalarField::on(fiber, "y1"), 0.5);
  cfg.tasks = {"metric",    "cometric",  "connection", "frame",
               "laplacian", "curvature", "identities"};
  cfg.sampling.count = count;
  return cfg;
}

bool rows_equal(const SweepRow& a, const SweepRow& b) {
  auto same = [](double u, double v) {
    return (std::isnan(u) && std::isnan(v)) || u == v;
  };
  return a.task == b.task && a.point_index == b.point_index && a.coords == b.coords &&
         same(a.closed_form, b.closed_form) && same(a.oracle, b.oracle) &&
         same(a.abs_diff, b.abs_diff) && a.pass == b.pass &&
         a.hypothesis_violation == b.hypothesis_violation && a.error == b.error;
}

double elapsed(std::chrono::steady_clock::time_point t0,
               std::chrono::steady_clock::time_point t1) {
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  int count = argc > 1 ? std::atoi(argv[1]) : 300;
  if (count <= 0) {
    std::fprintf(stderr, "usage: bench_sweep [points]\n");
    return 2;
  }
  RunConfig cfg = bench_config(count);

  SweepOptions serial;
  serial.parallel = false;
  SweepOptions parallel;
  parallel.parallel = true;

  auto t0 = std::chrono::steady_clock::now();
  SweepResult rs = run_sweep(cfg, serial);
  auto t1 = std::chrono::steady_clock::now();
  SweepResult rp = run_sweep(cfg, parallel);
  auto t2 = std::chrono::steady_clock::now();

  if (rs.rows.size() != rp.rows.size()) {
    std::fprintf(stderr, "row counts differ: %zu vs %zu\n", rs.rows.size(),
                 rp.rows.size());
    return 1;
  }
  for (std::size_t i = 0; i < rs.rows.size(); ++i)
    if (!rows_equal(rs.rows[i], rp.rows[i])) {
      std::fprintf(stderr, "row %zu differs between serial and parallel\n", i);
      return 1;
    }

  double ts = elapsed(t0, t1), tp = elapsed(t1, t2);
  std::printf("points %d, rows %zu\n", count, rs.rows.size());
  std::printf("serial   %8.3f s\n", ts);
  std::printf("parallel %8.3f s   speedup x%.2f\n", tp, ts / (tp > 1e-9 ? tp : 1e-9));
  std::printf("rows identical\n");
  if (!rs.all_pass) {
    std::fprintf(stderr, "sweep reported failures\n");
    return 1;
  }
  return 0;
}
