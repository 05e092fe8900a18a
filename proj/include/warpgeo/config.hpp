#pragma once

// Run configuration: an INI-style text format declaring charts, fields, the
// product spec, sampling, tolerances and the task list.

#include <map>
#include <optional>
#include <string>

#include "warpgeo/metric.hpp"

namespace warpgeo {

struct Tolerances {
  double metric = 1e-10;      // relative, on the determinant comparison
  double cometric = 1e-10;    // max-abs of cometric * metric - identity
  double connection = 1e-6;   // max-abs versus oracle Christoffels
  double frame = 1e-10;       // max-abs Gram deviation
  double laplacian = 1e-5;    // abs versus oracle Laplacian
  double curvature = 1e-5;    // max-abs over riemann/ricci/scalar
  double identities = 1e-10;  // max-abs sum-identity residual

  double for_task(const std::string& task) const;
  void set(const std::string& task, double v);
};

struct Sampling {
  int count = 100;
  std::uint64_t seed = 42;
  double margin = 1e-3;
};

inline const char* const kAllTasks[] = {"metric",    "cometric",  "connection", "frame",
                                        "laplacian", "curvature", "identities"};

struct RunConfig {
  WarpSpec spec;
  std::vector<std::string> tasks;
  std::optional<ScalarField> phi1, phi2;  // variant H Laplacian overrides
  Sampling sampling;
  Tolerances tol;
  std::string out_path;             // csv destination; empty means report.csv
  bool oracle_curvature_g = false;  // allow oracle-only curvature rows on variant G
};

// both throw ValidationError with the offending line or name in the message
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace warpgeo
