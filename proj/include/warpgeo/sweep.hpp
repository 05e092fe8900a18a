#pragma once

// Verification sweep: every configured task evaluated over the deterministic
// sample set, closed form against oracle, one row per comparison.

#include <string>
#include <vector>

#include "warpgeo/config.hpp"

namespace warpgeo {

struct SweepOptions {
  bool fd_oracle = false;  // finite-difference oracle instead of dual numbers
  double tol_scale = 1.0;  // multiplies every tolerance
  bool parallel = true;    // OpenMP over rows; results are identical either way
};

struct SweepRow {
  std::string task;
  int point_index = 0;
  VecD coords;  // joint coordinates, base block first
  double closed_form = 0.0;
  double oracle = 0.0;
  double abs_diff = 0.0;
  bool pass = false;
  bool hypothesis_violation = false;
  std::string error;  // non-empty when evaluation threw; such rows fail
};

struct TaskSummary {
  std::string task;
  int rows = 0;
  int failures = 0;  // rows with pass == false
  int errors = 0;    // rows that threw, hypothesis violations not included
  int hypothesis_violations = 0;
  double worst_diff = 0.0;  // largest finite abs_diff
  double tolerance = 0.0;   // effective tolerance the task was judged against
};

struct SweepResult {
  std::vector<SweepRow> rows;  // ordered by (task, point index)
  std::vector<TaskSummary> summaries;
  std::vector<VecD> points;
  bool all_pass = false;
  int hypothesis_violations = 0;
  double max_cometric_cond = 0.0;  // largest condition estimate of any inverted metric
};

// task tolerance after the finite-difference relaxation (x100 on connection,
// laplacian and curvature) and the global scale
double effective_tolerance(const Tolerances& tol, const std::string& task,
                           const SweepOptions& opt);

SweepResult run_sweep(const RunConfig& cfg, const SweepOptions& opt = {});

}  // namespace warpgeo
