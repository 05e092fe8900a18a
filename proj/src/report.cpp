#include "warpgeo/report.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "warpgeo/errors.hpp"

namespace warpgeo {

namespace {

void append_g17(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

std::string g17(double v) {
  std::string s;
  append_g17(s, v);
  return s;
}

}  // namespace

std::string csv_report(const SweepResult& res) {
  std::string out = "task,point_index,coords,closed_form,oracle,abs_diff,pass\n";
  for (const SweepRow& row : res.rows) {
    out += row.task;
    out += ',';
    out += std::to_string(row.point_index);
    out += ',';
    for (std::size_t i = 0; i < row.coords.size(); ++i) {
      if (i) out += ';';
      append_g17(out, row.coords[i]);
    }
    out += ',';
    append_g17(out, row.closed_form);
    out += ',';
    append_g17(out, row.oracle);
    out += ',';
    append_g17(out, row.abs_diff);
    out += ',';
    out += row.pass ? '1' : '0';
    out += '\n';
  }
  return out;
}

void write_csv_file(const SweepResult& res, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open output file \"" + path + "\"");
  f << csv_report(res);
  if (!f) throw ValidationError("write to \"" + path + "\" failed");
}

void print_table(const RunConfig& cfg, const SweepOptions& opt, const SweepResult& res,
                 std::ostream& out) {
  out << "sweep: " << res.points.size() << " points, seed " << cfg.sampling.seed
      << ", margin " << g17(cfg.sampling.margin);
  out << ", oracle " << (opt.fd_oracle ? "finite-difference" : "dual-number");
  if (opt.tol_scale != 1.0) out << ", tolerance scale " << g17(opt.tol_scale);
  out << "\n";
  out << "variant " << (cfg.spec.variant == Variant::G ? "G" : "H") << ", base dim "
      << cfg.spec.base_dim() << ", fiber dim " << cfg.spec.fiber_dim() << ", c "
      << g17(cfg.spec.c) << "\n\n";

  char line[256];
  std::snprintf(line, sizeof line, "%-12s %6s %6s %6s %6s  %-13s %s\n", "task", "rows",
                "fail", "error", "hyp", "worst diff", "tolerance");
  out << line;
  for (const TaskSummary& s : res.summaries) {
    std::snprintf(line, sizeof line, "%-12s %6d %6d %6d %6d  %-13.6g %.6g\n",
                  s.task.c_str(), s.rows, s.failures, s.errors, s.hypothesis_violations,
                  s.worst_diff, s.tolerance);
    out << line;
  }
  out << "\n";
  if (res.max_cometric_cond > 1e12)
    out << "warning: metric inversion condition estimate reached "
        << g17(res.max_cometric_cond) << "\n";
  if (res.hypothesis_violations > 0)
    out << "hypothesis violations: " << res.hypothesis_violations << "\n";
  out << "RESULT: " << (res.all_pass ? "PASS" : "FAIL") << "\n";
}

}  // namespace warpgeo
