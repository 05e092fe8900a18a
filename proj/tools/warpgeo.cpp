// warpgeo: batch driver for the product-metric verification library.
//
//   warpgeo check <config>                validate a config file
//   warpgeo run <config>                  run the verification sweep
//   warpgeo point <config> --at <coords>  dump every object at one point
//   warpgeo catalog                       list built-in charts
//
// exit codes: 0 all comparisons pass, 1 comparison failure or hypothesis
// violation, 2 config or domain error.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "warpgeo/config.hpp"
#include "warpgeo/curvature.hpp"
#include "warpgeo/frame.hpp"
#include "warpgeo/laplacian.hpp"
#include "warpgeo/report.hpp"
#include "warpgeo/sweep.hpp"

namespace {

using namespace warpgeo;

int usage(std::ostream& out, int code) {
  out << "usage: warpgeo <command> [options]\n"
         "  check <config>                validate a config file\n"
         "  run <config>                  run the verification sweep\n"
         "  point <config> --at <coords>  dump every object at one point\n"
         "  catalog                       list built-in charts\n"
         "options:\n"
         "  --tolerance-scale <r>   multiply every tolerance by r (r > 0)\n"
         "  --fd-oracle             use the finite-difference oracle\n"
         "  --out <path>            csv destination for run\n"
         "  --at <v1,v2,...>        joint coordinates for point (base block first)\n";
  return code;
}

struct Args {
  std::string command;
  std::string config_path;
  SweepOptions opt;
  std::string out_override;
  std::string at;
};

// returns nullopt after printing usage on malformed input
std::optional<Args> parse_args(int argc, char** argv) {
  if (argc < 2) {
    usage(std::cerr, 2);
    return std::nullopt;
  }
  Args a;
  a.command = argv[1];
  int i = 2;
  if (a.command == "check" || a.command == "run" || a.command == "point") {
    if (i >= argc || argv[i][0] == '-') {
      std::cerr << "error: " << a.command << " requires a config path\n";
      return std::nullopt;
    }
    a.config_path = argv[i++];
  } else if (a.command != "catalog") {
    std::cerr << "error: unknown command \"" << a.command << "\"\n";
    usage(std::cerr, 2);
    return std::nullopt;
  }
  for (; i < argc; ++i) {
    std::string flag = argv[i];
    auto value = [&]() -> const char* {
      if (i + 1 >= argc) {
        std::cerr << "error: " << flag << " requires a value\n";
        return nullptr;
      }
      return argv[++i];
    };
    if (flag == "--tolerance-scale") {
      const char* v = value();
      if (!v) return std::nullopt;
      char* end = nullptr;
      double r = std::strtod(v, &end);
      if (end == v || *end != '\0' || !(r > 0.0)) {
        std::cerr << "error: --tolerance-scale needs a positive number, got \"" << v
                  << "\"\n";
        return std::nullopt;
      }
      a.opt.tol_scale = r;
    } else if (flag == "--fd-oracle") {
      a.opt.fd_oracle = true;
    } else if (flag == "--out") {
      const char* v = value();
      if (!v) return std::nullopt;
      a.out_override = v;
    } else if (flag == "--at") {
      const char* v = value();
      if (!v) return std::nullopt;
      a.at = v;
    } else {
      std::cerr << "error: unknown flag \"" << flag << "\"\n";
      usage(std::cerr, 2);
      return std::nullopt;
    }
  }
  return a;
}

VecD parse_coords(const std::string& text) {
  VecD out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string piece = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                    : comma - pos);
    char* end = nullptr;
    double v = std::strtod(piece.c_str(), &end);
    if (end == piece.c_str() || *end != '\0')
      throw ValidationError("--at: cannot parse coordinate \"" + piece + "\"");
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string vec_str(const VecD& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += num(v[i]);
  }
  return s + ")";
}

void print_matrix(std::ostream& out, const MatD& m, const char* indent) {
  for (int i = 0; i < m.rows; ++i) {
    out << indent << "[";
    for (int j = 0; j < m.cols; ++j) {
      if (j) out << ", ";
      out << num(m(i, j));
    }
    out << "]\n";
  }
}

// runs one dump section; failures are annotated inline and do not stop the dump
template <class F>
void section(std::ostream& out, const char* title, F&& body) {
  out << title << "\n";
  try {
    body();
  } catch (const std::exception& e) {
    out << "  error: " << e.what() << "\n";
  }
  out << "\n";
}

int cmd_catalog() {
  std::cout << "built-in charts:\n";
  std::cout << "  euclidean:N[:prefix]  flat box (0.5,4)^N, coordinates x1..xN or "
               "prefix1..prefixN\n";
  std::cout << "  sphere2               unit sphere, theta in (0,pi), phi in (-pi,pi)\n";
  std::cout << "  halfplane2            hyperbolic half-plane 1/y^2 metric, x in "
               "(-4,4), y in (0.25,4)\n";
  return 0;
}

int cmd_check(const Args& a) {
  RunConfig cfg = load_config(a.config_path);
  std::cout << "config ok: variant " << (cfg.spec.variant == Variant::G ? "G" : "H")
            << ", base " << cfg.spec.base().name << " (dim " << cfg.spec.base_dim()
            << "), fiber " << cfg.spec.fiber().name << " (dim " << cfg.spec.fiber_dim()
            << "), c " << num(cfg.spec.c) << ", tasks";
  for (const std::string& t : cfg.tasks) std::cout << " " << t;
  std::cout << "\n";
  return 0;
}

int cmd_run(const Args& a) {
  RunConfig cfg = load_config(a.config_path);
  SweepResult res = run_sweep(cfg, a.opt);
  std::string out_path = !a.out_override.empty()
                             ? a.out_override
                             : (!cfg.out_path.empty() ? cfg.out_path : "report.csv");
  write_csv_file(res, out_path);
  print_table(cfg, a.opt, res, std::cout);
  std::cout << "csv written to " << out_path << "\n";
  return res.all_pass ? 0 : 1;
}

int cmd_point(const Args& a) {
  RunConfig cfg = load_config(a.config_path);
  if (a.at.empty()) {
    std::cerr << "error: point requires --at <coords>\n";
    return 2;
  }
  const WarpSpec& spec = cfg.spec;
  VecD q = parse_coords(a.at);
  if (static_cast<int>(q.size()) != spec.dim())
    throw ValidationError("--at: expected " + std::to_string(spec.dim()) +
                          " coordinates, got " + std::to_string(q.size()));
  spec.require_in_domain(q);
  auto [x, y] = spec.split(q);
  std::ostream& out = std::cout;
  OracleOptions oo;
  oo.fd = a.opt.fd_oracle;

  out << "point " << vec_str(q) << " = base " << vec_str(x) << " x fiber " << vec_str(y)
      << "\n";
  out << "variant " << (spec.variant == Variant::G ? "G" : "H") << ", c " << num(spec.c)
      << ", f1 = " << num(spec.f1.value(x)) << ", f2 = " << num(spec.f2.value(y))
      << "\n\n";

  section(out, "metric", [&] {
    MatD g = assemble(spec, q);
    print_matrix(out, g, "  ");
    RiemannianCheck rc = is_riemannian(spec, q);
    const char* cls = rc.cls == MetricClass::Riemannian
                          ? "riemannian"
                          : (rc.cls == MetricClass::Degenerate ? "degenerate"
                                                               : "indefinite");
    out << "  classification: " << cls;
    if (spec.variant == Variant::G) out << "  (c^2 b1 b2 = " << num(rc.diagnostic) << ")";
    out << "\n";
    out << "  det (direct) = " << num(det(g)) << "\n";
    if (spec.variant == Variant::G)
      out << "  det (product formula) = " << num(det_closed_form(spec, q)) << "\n";
  });

  section(out, "cometric", [&] {
    double cond = 0.0;
    MatD inv = cometric(spec, q, &cond);
    print_matrix(out, inv, "  ");
    out << "  identity deviation = " << num(max_abs_diff(matmul(inv, assemble(spec, q)),
                                                         MatD::identity(spec.dim())))
        << ", condition estimate = " << num(cond) << "\n";
  });

  section(out, "gradients of the lifted warping functions", [&] {
    out << "  grad lift f1 = " << vec_str(grad_lift_warp(spec, Side::Base, q)) << "\n";
    out << "  grad lift f2 = " << vec_str(grad_lift_warp(spec, Side::Fiber, q)) << "\n";
  });

  section(out, "connection on lifted coordinate fields", [&] {
    int m1 = spec.base_dim(), n = spec.dim();
    for (int ai = 0; ai < n; ++ai) {
      LiftedField xf = LiftedField::coordinate(
          spec, ai < m1 ? Side::Base : Side::Fiber, ai < m1 ? ai : ai - m1);
      for (int b = 0; b < n; ++b) {
        LiftedField yf = LiftedField::coordinate(
            spec, b < m1 ? Side::Base : Side::Fiber, b < m1 ? b : b - m1);
        out << "  nabla_d" << ai << " d" << b << " = "
            << vec_str(nabla_lifted(spec, xf, yf, q)) << "\n";
      }
    }
  });

  section(out, "adapted orthonormal frame", [&] {
    FrameData fr = product_frame(spec, q);
    for (std::size_t k = 0; k < fr.vectors.size(); ++k)
      out << "  u" << k + 1 << " = " << vec_str(fr.vectors[k])
          << "   |u'|^2 = " << num(fr.norms_sq[k]) << "\n";
    MatD g = assemble(spec, q);
    double worst = 0.0;
    for (std::size_t i = 0; i < fr.vectors.size(); ++i)
      for (std::size_t j = 0; j < fr.vectors.size(); ++j) {
        double target = i == j ? 1.0 : 0.0;
        worst = std::max(worst,
                         std::abs(inner(g, fr.vectors[i], fr.vectors[j]) - target));
      }
    out << "  gram deviation = " << num(worst) << "\n";
    out << "  sum identity residual = " << num(sum_identities_residual(spec, q)) << "\n";
  });

  section(out, "laplacians of the lifts", [&] {
    const ScalarField* p1 = cfg.phi1 ? &*cfg.phi1 : nullptr;
    const ScalarField* p2 = cfg.phi2 ? &*cfg.phi2 : nullptr;
    LaplacianReport lr = laplacian_report(spec, p1, p2, q, oo);
    out << "  base side:  closed = " << num(lr.closed_base)
        << ", oracle = " << num(lr.oracle_base) << ", diff = " << num(lr.diff_base)
        << "\n";
    out << "  fiber side: closed = " << num(lr.closed_fiber)
        << ", oracle = " << num(lr.oracle_fiber) << ", diff = " << num(lr.diff_fiber)
        << "\n";
  });

  section(out, "harmonicity defects", [&] {
    out << "  base side  = " << num(harmonicity_defect(spec, Side::Base, q)) << "\n";
    out << "  fiber side = " << num(harmonicity_defect(spec, Side::Fiber, q)) << "\n";
  });

  section(out, "curvature", [&] {
    if (spec.variant == Variant::H) {
      CurvatureReport cr = curvature_report(spec, q, oo);
      out << "  scalar: closed = " << num(cr.scalar_closed_v)
          << ", oracle = " << num(cr.scalar_oracle_v) << ", diff = "
          << num(cr.scalar_diff) << "\n";
      out << "  worst riemann diff = " << num(cr.riemann_diff)
          << ", worst ricci diff = " << num(cr.ricci_diff) << "\n";
    } else {
      MetricField mf = product_metric_field(spec, a.opt.fd_oracle);
      out << "  no closed form on this variant; oracle scalar = "
          << num(scalar_curvature(mf, q, oo)) << "\n";
    }
  });

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::optional<Args> a = parse_args(argc, argv);
  if (!a) return 2;
  try {
    if (a->command == "catalog") return cmd_catalog();
    if (a->command == "check") return cmd_check(*a);
    if (a->command == "run") return cmd_run(*a);
    if (a->command == "point") return cmd_point(*a);
  } catch (const warpgeo::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return usage(std::cerr, 2);
}
