#pragma once

// Report emission: a machine-readable CSV (one row per comparison) and a
// human-readable summary table.  Output depends only on the sweep result,
// so repeated runs of the same config produce identical bytes.

#include <iosfwd>
#include <string>

#include "warpgeo/sweep.hpp"

namespace warpgeo {

// columns: task,point_index,coords,closed_form,oracle,abs_diff,pass
// coords are ';'-joined, numbers printed with 17 significant digits
std::string csv_report(const SweepResult& res);
void write_csv_file(const SweepResult& res, const std::string& path);

void print_table(const RunConfig& cfg, const SweepOptions& opt, const SweepResult& res,
                 std::ostream& out);

}  // namespace warpgeo
