#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <string>

#include "warpgeo/config.hpp"

using namespace warpgeo;

namespace {

const char* kMinimal =
    "[chart base]\n"
    "catalog = euclidean:1\n"
    "[chart fiber]\n"
    "catalog = euclidean:1\n"
    "coords = y1\n"
    "[field f1]\n"
    "chart = base\n"
    "expr = x1\n"
    "[field f2]\n"
    "chart = fiber\n"
    "expr = y1\n"
    "[spec]\n"
    "variant = G\n"
    "base = base\n"
    "fiber = fiber\n"
    "f1 = f1\n"
    "f2 = f2\n"
    "c = 0.5\n"
    "[run]\n"
    "tasks = metric\n";

// the ValidationError message for a config that must not load
std::string err_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

bool has(const std::string& msg, const std::string& needle) {
  return msg.find(needle) != std::string::npos;
}

// swap one "key = value" line of the minimal config for another (or drop it)
std::string minimal_with(const std::string& from, const std::string& to) {
  std::string text = kMinimal;
  std::size_t at = text.find(from);
  REQUIRE(at != std::string::npos);
  text.replace(at, from.size(), to);
  return text;
}

}  // namespace

TEST_CASE("minimal config loads with defaults") {
  RunConfig cfg = parse_config_text(kMinimal);
  CHECK(cfg.spec.variant == Variant::G);
  CHECK(cfg.spec.c == 0.5);
  CHECK(cfg.spec.dim() == 2);
  CHECK(cfg.spec.base().name == "base");
  CHECK(cfg.spec.fiber().coords[0] == "y1");
  REQUIRE(cfg.tasks.size() == 1);
  CHECK(cfg.tasks[0] == "metric");
  CHECK(!cfg.phi1.has_value());
  CHECK(!cfg.phi2.has_value());

  CHECK(cfg.sampling.count == 100);
  CHECK(cfg.sampling.seed == 42);
  CHECK(cfg.sampling.margin == 1e-3);
  CHECK(cfg.tol.metric == 1e-10);
  CHECK(cfg.tol.laplacian == 1e-5);
  CHECK(cfg.out_path.empty());
  CHECK(!cfg.oracle_curvature_g);

  // the loaded spec is the worked 1D x 1D example
  MatD g = assemble(cfg.spec, {2.0, 3.0});
  CHECK(g(0, 0) == 9.0);
  CHECK(g(0, 1) == 3.0);
  CHECK(g(1, 1) == 4.0);
}

TEST_CASE("full config with custom chart, overrides and probe fields") {
  const char* text =
      "# comment lines and blank lines are skipped\n"
      "\n"
      "[chart B]\n"
      "catalog = euclidean:2\n"
      "domain = 0.5 4 -2 2\n"
      "[chart F]\n"
      "catalog = custom\n"
      "coords = p q\n"
      "domain = -1 1 1 3\n"
      "g11 = 1 + p^2\n"
      "g12 = p*q/8\n"
      "g22 = 2\n"
      "[field warp1]\n"
      "chart = B\n"
      "expr = x1\n"
      "[field warp2]\n"
      "chart = F\n"
      "expr = 2 + q/4\n"
      "[field probe1]\n"
      "chart = B\n"
      "expr = \"sin(x1) + x2\"\n"
      "[field probe2]\n"
      "chart = F\n"
      "expr = p*q\n"
      "[spec]\n"
      "variant = H\n"
      "base = B\n"
      "fiber = F\n"
      "f1 = warp1\n"
      "f2 = warp2\n"
      "c = 0.8\n"
      "phi1 = probe1\n"
      "phi2 = probe2\n"
      "[sampling]\n"
      "count = 17\n"
      "seed = 7\n"
      "margin = 0.05\n"
      "[tolerances]\n"
      "laplacian = 0.001\n"
      "metric = 1e-12\n"
      "[run]\n"
      "tasks = metric cometric laplacian\n"
      "out = custom.csv\n";
  RunConfig cfg = parse_config_text(text);
  CHECK(cfg.spec.variant == Variant::H);
  CHECK(cfg.spec.base_dim() == 2);
  CHECK(cfg.spec.fiber_dim() == 2);

  MatD gf = cfg.spec.fiber().metric_at({0.5, 2.0});
  CHECK(gf(0, 0) == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(gf(0, 1) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(gf(1, 1) == 2.0);

  REQUIRE(cfg.phi1.has_value());
  REQUIRE(cfg.phi2.has_value());
  CHECK(cfg.phi1->value({1.0, 0.5}) == doctest::Approx(std::sin(1.0) + 0.5).epsilon(1e-15));
  CHECK(cfg.phi2->value({0.5, 2.0}) == 1.0);

  CHECK(cfg.sampling.count == 17);
  CHECK(cfg.sampling.seed == 7);
  CHECK(cfg.sampling.margin == 0.05);
  CHECK(cfg.tol.laplacian == 0.001);
  CHECK(cfg.tol.metric == 1e-12);
  CHECK(cfg.tol.connection == 1e-6);
  REQUIRE(cfg.tasks.size() == 3);
  CHECK(cfg.tasks[2] == "laplacian");
  CHECK(cfg.out_path == "custom.csv");
}

TEST_CASE("degenerate coupling still loads") {
  // c = 1 with unit gradients makes the frame construction degenerate at
  // every point, but that is a runtime report, not a config error
  std::string text = minimal_with("c = 0.5", "c = 1.0");
  text.replace(text.find("tasks = metric"), 14, "tasks = frame");
  RunConfig cfg = parse_config_text(text);
  CHECK(cfg.spec.c == 1.0);
  CHECK(cfg.tasks[0] == "frame");
}

TEST_CASE("undefined references are named in the error") {
  CHECK(has(err_of(minimal_with("base = base", "base = m3")), "undefined chart \"m3\""));
  CHECK(has(err_of(minimal_with("fiber = fiber", "fiber = m3")), "undefined chart \"m3\""));
  CHECK(has(err_of(minimal_with("f1 = f1", "f1 = nosuch")), "undefined field \"nosuch\""));
  CHECK(has(err_of(minimal_with("chart = base", "chart = nowhere")),
            "references undefined chart \"nowhere\""));
  // a field resolved through a spec key must live on the matching chart
  CHECK(has(err_of(minimal_with("f2 = f2", "f2 = f1")), "needs chart \"fiber\""));
}

TEST_CASE("line numbers point at the offending text") {
  CHECK(err_of("x = 1\n") == "line 1: key outside any section");
  CHECK(err_of("[chart base\ncatalog = euclidean:1\n") ==
        "line 1: unterminated section header");
  CHECK(err_of("[frobnicate]\n") == "line 1: unknown section [frobnicate]");
  CHECK(err_of("[chart base]\nno equals sign\n") == "line 2: expected key = value");
  CHECK(err_of("[chart base]\n= 3\n") == "line 2: empty key");
  CHECK(err_of("[chart]\n") == "line 1: [chart] section needs a name");
  CHECK(err_of("[spec extra]\n") == "line 1: [spec] takes no name");
  CHECK(err_of("[chart a b c]\n") == "line 1: section header has too many words");
}

TEST_CASE("duplicates are rejected") {
  std::string dup_key = minimal_with("c = 0.5", "c = 0.5\nc = 0.7");
  CHECK(has(err_of(dup_key), "duplicate key \"c\""));
  std::string dup_chart = minimal_with("[chart fiber]", "[chart base]");
  CHECK(has(err_of(dup_chart), "duplicate chart \"base\""));
  std::string dup_field = minimal_with("[field f2]", "[field f1]");
  CHECK(has(err_of(dup_field), "duplicate field \"f1\""));
  CHECK(has(err_of(std::string(kMinimal) + "[spec]\n"), "duplicate [spec] section"));
  CHECK(has(err_of(std::string(kMinimal) + "[run]\n"), "duplicate [run] section"));
}

TEST_CASE("spec section validation") {
  CHECK(err_of("[run]\ntasks = metric\n") == "missing [spec] section");

  std::string no_run(kMinimal);
  no_run.resize(no_run.find("[run]"));
  CHECK(err_of(no_run) == "missing [run] section");

  CHECK(has(err_of(minimal_with("base = base\n", "")), "needs base and fiber chart names"));
  CHECK(has(err_of(minimal_with("variant = G", "variant = Q")), "variant must be G or H"));
  CHECK(has(err_of(minimal_with("c = 0.5\n", "")), "[spec] needs key \"c\""));
  CHECK(has(err_of(minimal_with("c = 0.5", "c = banana")), "not a number"));
  CHECK(has(err_of(minimal_with("c = 0.5", "c = 0.5\nfrob = 1")),
            "unknown key \"frob\" in [spec]"));
  CHECK(has(err_of(minimal_with("c = 0.5", "c = 0.5\nphi1 = f1")), "variant H only"));
}

TEST_CASE("chart section validation") {
  CHECK(has(err_of(minimal_with("catalog = euclidean:1\ncoords = y1", "coords = y1")),
            "needs a catalog key"));
  CHECK(has(err_of(minimal_with("coords = y1\n", "coords = y1\nfrob = 1\n")),
            "unknown key \"frob\" in chart \"fiber\""));
  CHECK(has(err_of(minimal_with("catalog = euclidean:1\ncoords = y1", "catalog = torus")),
            "unknown chart \"torus\""));
  CHECK(has(err_of(minimal_with("coords = y1", "coords = u v")),
            "coords list must have 1 names"));

  std::string custom = minimal_with("catalog = euclidean:1\ncoords = y1", "catalog = custom");
  CHECK(has(err_of(custom), "needs coords and domain"));
  std::string bad_domain = minimal_with("catalog = euclidean:1\ncoords = y1",
                                        "catalog = custom\ncoords = y1\ndomain = 0 1 2");
  CHECK(has(err_of(bad_domain), "domain needs 2 numbers"));
  std::string empty_iv = minimal_with("catalog = euclidean:1\ncoords = y1",
                                      "catalog = custom\ncoords = y1\ndomain = 2 1\ng11 = 1");
  CHECK(has(err_of(empty_iv), "domain interval is empty"));
  std::string bad_expr = minimal_with("catalog = euclidean:1\ncoords = y1",
                                      "catalog = custom\ncoords = y1\ndomain = 0 1\ng11 = y1 +");
  CHECK(has(err_of(bad_expr), "chart \"fiber\""));
}

TEST_CASE("renaming coordinates relabels without changing the metric") {
  const char* text =
      "[chart base]\n"
      "catalog = halfplane2\n"
      "coords = y x\n"
      "[chart fiber]\n"
      "catalog = euclidean:1:y\n"
      "[field f1]\n"
      "chart = base\n"
      "expr = 2 + y/8\n"
      "[field f2]\n"
      "chart = fiber\n"
      "expr = y1\n"
      "[spec]\n"
      "variant = G\n"
      "base = base\n"
      "fiber = fiber\n"
      "f1 = f1\n"
      "f2 = f2\n"
      "c = 0.3\n"
      "[run]\n"
      "tasks = metric\n";
  RunConfig cfg = parse_config_text(text);
  // positional rename: the old first coordinate is now called "y", so the
  // entries must still evaluate as functions of position, not of spelling
  Chart plain = halfplane2_chart();
  VecD p = {1.0, 2.0};
  MatD renamed = cfg.spec.base().metric_at(p);
  MatD original = plain.metric_at(p);
  CHECK(max_abs_diff(renamed, original) == 0.0);
  CHECK(cfg.spec.base().coords[0] == "y");
  CHECK(cfg.spec.base().coords[1] == "x");
  // the field expression binds to the renamed labels
  CHECK(cfg.spec.f1.value(p) == 2.125);
}

TEST_CASE("domain overrides apply to catalog charts") {
  std::string text = minimal_with("catalog = euclidean:1\ncoords = y1",
                                  "catalog = euclidean:1\ncoords = y1\ndomain = 1 9");
  RunConfig cfg = parse_config_text(text);
  CHECK(cfg.spec.fiber().domain[0].first == 1.0);
  CHECK(cfg.spec.fiber().domain[0].second == 9.0);
}

TEST_CASE("sampling section validation") {
  auto with_sampling = [&](const std::string& body) {
    return minimal_with("[run]", "[sampling]\n" + body + "[run]");
  };
  CHECK(has(err_of(with_sampling("count = 0\n")), "count must be a positive integer"));
  CHECK(has(err_of(with_sampling("count = 2.5\n")), "count must be a positive integer"));
  CHECK(has(err_of(with_sampling("seed = -3\n")), "seed must be a non-negative integer"));
  CHECK(has(err_of(with_sampling("margin = 0.7\n")), "margin must lie in [0, 0.5)"));
  CHECK(has(err_of(with_sampling("frob = 1\n")), "unknown key \"frob\" in [sampling]"));
  RunConfig cfg = parse_config_text(with_sampling("count = 3\nmargin = 0\n"));
  CHECK(cfg.sampling.count == 3);
  CHECK(cfg.sampling.margin == 0.0);
}

TEST_CASE("tolerance section validation") {
  auto with_tol = [&](const std::string& body) {
    return minimal_with("[run]", "[tolerances]\n" + body + "[run]");
  };
  CHECK(has(err_of(with_tol("frob = 1\n")), "unknown tolerance key \"frob\""));
  CHECK(has(err_of(with_tol("metric = -1\n")), "must be positive"));
  CHECK(has(err_of(with_tol("metric = abc\n")), "not a number"));

  Tolerances t;
  t.set("curvature", 0.5);
  CHECK(t.for_task("curvature") == 0.5);
  CHECK(t.for_task("frame") == 1e-10);
  CHECK_THROWS_AS(t.for_task("frobnicate"), ValidationError);
  CHECK_THROWS_AS(t.set("frobnicate", 1.0), ValidationError);
}

TEST_CASE("run section validation") {
  CHECK(has(err_of(minimal_with("tasks = metric", "tasks = frobnicate")),
            "unknown task \"frobnicate\""));
  CHECK(has(err_of(minimal_with("tasks = metric", "tasks =")), "task list is empty"));
  CHECK(has(err_of(minimal_with("tasks = metric\n", "out = a.csv\n")),
            "[run] needs key \"tasks\""));
  CHECK(has(err_of(minimal_with("tasks = metric", "tasks = metric\nfrob = 1")),
            "unknown key \"frob\" in [run]"));
  CHECK(has(err_of(minimal_with("tasks = metric", "tasks = metric\noracle_curvature_g = maybe")),
            "oracle_curvature_g must be on or off"));
}

TEST_CASE("curvature on the general variant is gated") {
  std::string gated = minimal_with("tasks = metric", "tasks = curvature");
  CHECK(has(err_of(gated), "oracle_curvature_g"));
  RunConfig cfg =
      parse_config_text(minimal_with("tasks = metric", "tasks = curvature\noracle_curvature_g = on"));
  CHECK(cfg.oracle_curvature_g);

  // closed-form variant needs no gate
  std::string h = minimal_with("variant = G", "variant = H");
  h = h.substr(0, h.find("tasks = metric")) + "tasks = curvature\n";
  CHECK(parse_config_text(h).tasks[0] == "curvature");
}

TEST_CASE("curvature task caps the product dimension") {
  const char* text =
      "[chart base]\n"
      "catalog = euclidean:3\n"
      "[chart fiber]\n"
      "catalog = custom\n"
      "coords = a b c d e f\n"
      "domain = 0.5 4 0.5 4 0.5 4 0.5 4 0.5 4 0.5 4\n"
      "g11 = 1\n"
      "g22 = 1\n"
      "g33 = 1\n"
      "g44 = 1\n"
      "g55 = 1\n"
      "g66 = 1\n"
      "[field f1]\n"
      "chart = base\n"
      "expr = x1\n"
      "[field f2]\n"
      "chart = fiber\n"
      "expr = a\n"
      "[spec]\n"
      "variant = H\n"
      "base = base\n"
      "fiber = fiber\n"
      "f1 = f1\n"
      "f2 = f2\n"
      "c = 0.5\n"
      "[run]\n"
      "tasks = curvature\n";
  CHECK(has(err_of(text), "dimension at most 8"));
  std::string ok(text);
  ok.replace(ok.find("tasks = curvature"), 17, "tasks = metric");
  CHECK(parse_config_text(ok).spec.dim() == 9);
}

TEST_CASE("load_config reads from disk") {
  std::string path = "config_roundtrip_tmp.ini";
  {
    std::ofstream out(path);
    out << kMinimal;
  }
  RunConfig cfg = load_config(path);
  CHECK(cfg.spec.c == 0.5);
  std::remove(path.c_str());
  try {
    load_config("no_such_file.ini");
    CHECK(false);
  } catch (const ValidationError& e) {
    CHECK(has(e.what(), "no_such_file.ini"));
  }
}
