#include "warpgeo/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "warpgeo/curvature.hpp"
#include "warpgeo/frame.hpp"
#include "warpgeo/laplacian.hpp"

namespace warpgeo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

bool fd_relaxed(const std::string& task) {
  return task == "connection" || task == "laplacian" || task == "curvature";
}

// task "metric": variant G compares the determinant product formula against
// the direct determinant (relative); variant H compares the always-riemannian
// classification against a Cholesky test (1 = positive definite).
void metric_row(const WarpSpec& spec, const VecD& q, SweepRow& row) {
  if (spec.variant == Variant::G) {
    double closed = det_closed_form(spec, q);
    double direct = det(assemble(spec, q));
    row.closed_form = closed;
    row.oracle = direct;
    row.abs_diff = std::abs(closed - direct) / std::max(1.0, std::abs(direct));
  } else {
    RiemannianCheck rc = is_riemannian(spec, q);
    bool pd = cholesky(assemble(spec, q));
    row.closed_form = rc.cls == MetricClass::Riemannian ? 1.0 : 0.0;
    row.oracle = pd ? 1.0 : 0.0;
    row.abs_diff = std::abs(row.closed_form - row.oracle);
  }
}

// task "cometric": worst entry of cometric * metric against the identity
void cometric_row(const WarpSpec& spec, const VecD& q, SweepRow& row, double& cond) {
  MatD inv = cometric(spec, q, &cond);
  MatD prod = matmul(inv, assemble(spec, q));
  int n = prod.rows;
  double worst = -1.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double target = i == j ? 1.0 : 0.0;
      double d = std::abs(prod(i, j) - target);
      if (d > worst) {
        worst = d;
        row.closed_form = prod(i, j);
        row.oracle = target;
      }
    }
  row.abs_diff = worst;
}

// task "connection": nabla over every ordered pair of lifted coordinate
// fields against the oracle Christoffel symbols of the assembled metric
void connection_row(const WarpSpec& spec, const SweepOptions& opt, const VecD& q,
                    SweepRow& row) {
  OracleOptions oo;
  oo.fd = opt.fd_oracle;
  MetricField mf = product_metric_field(spec, opt.fd_oracle);
  Tens3 gamma = christoffel(mf, q, oo);
  int m1 = spec.base_dim(), n = spec.dim();
  double worst = -1.0;
  for (int a = 0; a < n; ++a) {
    LiftedField x = LiftedField::coordinate(spec, a < m1 ? Side::Base : Side::Fiber,
                                            a < m1 ? a : a - m1);
    for (int b = 0; b < n; ++b) {
      LiftedField y = LiftedField::coordinate(spec, b < m1 ? Side::Base : Side::Fiber,
                                              b < m1 ? b : b - m1);
      VecD closed = nabla_lifted(spec, x, y, q);
      for (int l = 0; l < n; ++l) {
        double d = std::abs(closed[l] - gamma(l, a, b));
        if (d > worst) {
          worst = d;
          row.closed_form = closed[l];
          row.oracle = gamma(l, a, b);
        }
      }
    }
  }
  row.abs_diff = worst;
}

// task "frame": worst Gram entry of the adapted frame against the identity
void frame_row(const WarpSpec& spec, const VecD& q, SweepRow& row) {
  FrameData fr = product_frame(spec, q);
  MatD g = assemble(spec, q);
  int n = spec.dim();
  double worst = -1.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double target = i == j ? 1.0 : 0.0;
      double v = inner(g, fr.vectors[i], fr.vectors[j]);
      double d = std::abs(v - target);
      if (d > worst) {
        worst = d;
        row.closed_form = v;
        row.oracle = target;
      }
    }
  row.abs_diff = worst;
}

// task "laplacian": both lifted Laplacians against the oracle; the row keeps
// the side with the larger difference
void laplacian_row(const RunConfig& cfg, const SweepOptions& opt, const VecD& q,
                   SweepRow& row) {
  OracleOptions oo;
  oo.fd = opt.fd_oracle;
  const ScalarField* p1 = cfg.phi1 ? &*cfg.phi1 : nullptr;
  const ScalarField* p2 = cfg.phi2 ? &*cfg.phi2 : nullptr;
  LaplacianReport lr = laplacian_report(cfg.spec, p1, p2, q, oo);
  if (lr.diff_base >= lr.diff_fiber) {
    row.closed_form = lr.closed_base;
    row.oracle = lr.oracle_base;
  } else {
    row.closed_form = lr.closed_fiber;
    row.oracle = lr.oracle_fiber;
  }
  row.abs_diff = std::max(lr.diff_base, lr.diff_fiber);
}

// task "curvature": variant H compares the closed-form riemann/ricci/scalar
// values against the oracle; variant G has no closed form and records the
// oracle scalar curvature alone (enabled by an explicit config switch)
void curvature_row(const WarpSpec& spec, const SweepOptions& opt, const VecD& q,
                   SweepRow& row) {
  OracleOptions oo;
  oo.fd = opt.fd_oracle;
  if (spec.variant == Variant::G) {
    MetricField mf = product_metric_field(spec, opt.fd_oracle);
    row.closed_form = kNan;
    row.oracle = scalar_curvature(mf, q, oo);
    row.abs_diff = 0.0;
    return;
  }
  CurvatureReport cr = curvature_report(spec, q, oo);
  row.closed_form = cr.scalar_closed_v;
  row.oracle = cr.scalar_oracle_v;
  row.abs_diff = cr.worst;
}

// task "identities": largest sum-identity residual; compared against zero
void identities_row(const WarpSpec& spec, const VecD& q, SweepRow& row) {
  double r = sum_identities_residual(spec, q);
  row.closed_form = r;
  row.oracle = 0.0;
  row.abs_diff = std::abs(r);
}

SweepRow compute_row(const RunConfig& cfg, const SweepOptions& opt,
                     const std::string& task, int point_index, const VecD& q,
                     double tol, double& cond) {
  SweepRow row;
  row.task = task;
  row.point_index = point_index;
  row.coords = q;
  cond = 0.0;
  try {
    if (task == "metric")
      metric_row(cfg.spec, q, row);
    else if (task == "cometric")
      cometric_row(cfg.spec, q, row, cond);
    else if (task == "connection")
      connection_row(cfg.spec, opt, q, row);
    else if (task == "frame")
      frame_row(cfg.spec, q, row);
    else if (task == "laplacian")
      laplacian_row(cfg, opt, q, row);
    else if (task == "curvature")
      curvature_row(cfg.spec, opt, q, row);
    else if (task == "identities")
      identities_row(cfg.spec, q, row);
    else
      throw ValidationError("unknown task \"" + task + "\"");
    row.pass = std::isfinite(row.abs_diff) && row.abs_diff <= tol;
  } catch (const HypothesisError& e) {
    row.hypothesis_violation = true;
    row.closed_form = kNan;
    row.oracle = kNan;
    row.abs_diff = kInf;
    row.pass = false;
    row.error = e.what();
  } catch (const std::exception& e) {
    row.closed_form = kNan;
    row.oracle = kNan;
    row.abs_diff = kInf;
    row.pass = false;
    row.error = e.what();
  }
  return row;
}

}  // namespace

double effective_tolerance(const Tolerances& tol, const std::string& task,
                           const SweepOptions& opt) {
  double t = tol.for_task(task);
  if (opt.fd_oracle && fd_relaxed(task)) t *= 100.0;
  return t * opt.tol_scale;
}

SweepResult run_sweep(const RunConfig& cfg, const SweepOptions& opt) {
  SweepResult res;
  res.points = sample_product(cfg.spec, cfg.sampling.count, cfg.sampling.seed,
                              cfg.sampling.margin);
  const int num_tasks = static_cast<int>(cfg.tasks.size());
  const int num_points = static_cast<int>(res.points.size());
  const int total = num_tasks * num_points;
  res.rows.resize(total);
  std::vector<double> conds(total, 0.0);
  std::vector<double> tols(num_tasks);
  for (int t = 0; t < num_tasks; ++t)
    tols[t] = effective_tolerance(cfg.tol, cfg.tasks[t], opt);

  // each slot (t, p) is independent; the parallel and serial paths fill the
  // same preallocated vector, so the result does not depend on thread count
  if (opt.parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int idx = 0; idx < total; ++idx) {
      int t = idx / num_points, p = idx % num_points;
      res.rows[idx] =
          compute_row(cfg, opt, cfg.tasks[t], p, res.points[p], tols[t], conds[idx]);
    }
  } else {
    for (int idx = 0; idx < total; ++idx) {
      int t = idx / num_points, p = idx % num_points;
      res.rows[idx] =
          compute_row(cfg, opt, cfg.tasks[t], p, res.points[p], tols[t], conds[idx]);
    }
  }

  res.summaries.resize(num_tasks);
  res.all_pass = true;
  for (int t = 0; t < num_tasks; ++t) {
    TaskSummary& s = res.summaries[t];
    s.task = cfg.tasks[t];
    s.tolerance = tols[t];
    for (int p = 0; p < num_points; ++p) {
      const SweepRow& row = res.rows[static_cast<std::size_t>(t) * num_points + p];
      ++s.rows;
      if (!row.pass) ++s.failures;
      if (row.hypothesis_violation)
        ++s.hypothesis_violations;
      else if (!row.error.empty())
        ++s.errors;
      if (std::isfinite(row.abs_diff)) s.worst_diff = std::max(s.worst_diff, row.abs_diff);
    }
    res.hypothesis_violations += s.hypothesis_violations;
    if (s.failures > 0) res.all_pass = false;
  }
  if (res.hypothesis_violations > 0) res.all_pass = false;
  for (double c : conds) res.max_cometric_cond = std::max(res.max_cometric_cond, c);
  return res;
}

}  // namespace warpgeo
