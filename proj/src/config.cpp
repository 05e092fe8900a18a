#include "warpgeo/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace warpgeo {

double Tolerances::for_task(const std::string& task) const {
  if (task == "metric") return metric;
  if (task == "cometric") return cometric;
  if (task == "connection") return connection;
  if (task == "frame") return frame;
  if (task == "laplacian") return laplacian;
  if (task == "curvature") return curvature;
  if (task == "identities") return identities;
  throw ValidationError("unknown task \"" + task + "\"");
}

void Tolerances::set(const std::string& task, double v) {
  if (!(v > 0)) throw ValidationError("tolerance for \"" + task + "\" must be positive");
  if (task == "metric") metric = v;
  else if (task == "cometric") cometric = v;
  else if (task == "connection") connection = v;
  else if (task == "frame") frame = v;
  else if (task == "laplacian") laplacian = v;
  else if (task == "curvature") curvature = v;
  else if (task == "identities") identities = v;
  else throw ValidationError("unknown tolerance key \"" + task + "\"");
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    return s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

struct Section {
  std::string kind;  // "chart", "field", "spec", "sampling", "tolerances", "run"
  std::string name;  // chart/field name
  int line = 0;
  std::vector<std::pair<std::string, std::string>> kv;
  std::map<std::string, int> kv_line;

  const std::string* find(const std::string& key) const {
    for (const auto& [k, v] : kv)
      if (k == key) return &v;
    return nullptr;
  }
};

[[noreturn]] void fail_line(int line, const std::string& msg) {
  throw ValidationError("line " + std::to_string(line) + ": " + msg);
}

double parse_double(const Section& sec, const std::string& key, const std::string& v) {
  char* end = nullptr;
  double d = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    fail_line(sec.kv_line.at(key), "key \"" + key + "\": not a number: \"" + v + "\"");
  return d;
}

std::vector<Section> split_sections(const std::string& text) {
  std::vector<Section> sections;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    // full-line comments only; '#' may appear inside expressions otherwise
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') fail_line(line_no, "unterminated section header");
      std::vector<std::string> parts = split_ws(t.substr(1, t.size() - 2));
      if (parts.empty()) fail_line(line_no, "empty section header");
      Section sec;
      sec.kind = parts[0];
      if (parts.size() > 2) fail_line(line_no, "section header has too many words");
      if (parts.size() == 2) sec.name = parts[1];
      sec.line = line_no;
      if (sec.kind == "chart" || sec.kind == "field") {
        if (sec.name.empty())
          fail_line(line_no, "[" + sec.kind + "] section needs a name");
      } else if (sec.kind == "spec" || sec.kind == "sampling" || sec.kind == "tolerances" ||
                 sec.kind == "run") {
        if (!sec.name.empty()) fail_line(line_no, "[" + sec.kind + "] takes no name");
      } else {
        fail_line(line_no, "unknown section [" + sec.kind + "]");
      }
      sections.push_back(std::move(sec));
      continue;
    }
    std::size_t eq = t.find('=');
    if (eq == std::string::npos) fail_line(line_no, "expected key = value");
    if (sections.empty()) fail_line(line_no, "key outside any section");
    std::string key = trim(t.substr(0, eq));
    std::string value = unquote(trim(t.substr(eq + 1)));
    if (key.empty()) fail_line(line_no, "empty key");
    Section& sec = sections.back();
    if (sec.find(key)) fail_line(line_no, "duplicate key \"" + key + "\"");
    sec.kv.emplace_back(key, value);
    sec.kv_line[key] = line_no;
  }
  return sections;
}

std::vector<std::pair<double, double>> parse_domain(const Section& sec,
                                                    const std::string& v, int dim) {
  std::vector<std::string> nums = split_ws(v);
  int line = sec.kv_line.at("domain");
  if (static_cast<int>(nums.size()) != 2 * dim)
    fail_line(line, "domain needs " + std::to_string(2 * dim) +
                        " numbers (lo hi per coordinate)");
  std::vector<std::pair<double, double>> box;
  for (int i = 0; i < dim; ++i) {
    char* e1 = nullptr;
    char* e2 = nullptr;
    double lo = std::strtod(nums[2 * i].c_str(), &e1);
    double hi = std::strtod(nums[2 * i + 1].c_str(), &e2);
    if (*e1 != '\0' || *e2 != '\0') fail_line(line, "domain entries must be numbers");
    if (!(lo < hi)) fail_line(line, "domain interval is empty");
    box.push_back({lo, hi});
  }
  return box;
}

Chart build_config_chart(const Section& sec) {
  const std::string* catalog = sec.find("catalog");
  if (!catalog) fail_line(sec.line, "chart \"" + sec.name + "\" needs a catalog key");
  std::vector<std::string> known = {"catalog", "coords", "domain"};
  Chart chart;
  if (*catalog == "custom") {
    const std::string* coords = sec.find("coords");
    const std::string* domain = sec.find("domain");
    if (!coords || !domain)
      fail_line(sec.line, "custom chart \"" + sec.name + "\" needs coords and domain");
    std::vector<std::string> names = split_ws(*coords);
    int dim = static_cast<int>(names.size());
    if (dim < 1) fail_line(sec.kv_line.at("coords"), "coords list is empty");
    std::vector<std::string> entries(static_cast<std::size_t>(dim) * dim);
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j) {
        std::string key = "g" + std::to_string(i + 1) + std::to_string(j + 1);
        known.push_back(key);
        if (const std::string* src = sec.find(key))
          entries[static_cast<std::size_t>(i) * dim + j] = *src;
      }
    for (const auto& [k, v] : sec.kv)
      if (std::find(known.begin(), known.end(), k) == known.end())
        fail_line(sec.kv_line.at(k), "unknown key \"" + k + "\" in chart \"" + sec.name + "\"");
    try {
      chart = custom_chart(sec.name, names, parse_domain(sec, *domain, dim), entries);
    } catch (const ParseError& e) {
      fail_line(sec.line, "chart \"" + sec.name + "\": " + e.what());
    }
    return chart;
  }
  for (const auto& [k, v] : sec.kv)
    if (std::find(known.begin(), known.end(), k) == known.end())
      fail_line(sec.kv_line.at(k), "unknown key \"" + k + "\" in chart \"" + sec.name + "\"");
  try {
    chart = chart_from_catalog(*catalog);
  } catch (const ValidationError& e) {
    fail_line(sec.kv_line.at("catalog"), e.what());
  }
  chart.name = sec.name;
  if (const std::string* coords = sec.find("coords")) {
    std::vector<std::string> names = split_ws(*coords);
    if (static_cast<int>(names.size()) != chart.dim())
      fail_line(sec.kv_line.at("coords"), "coords list must have " +
                                              std::to_string(chart.dim()) + " names");
    // re-render the catalog entries under the new names: same metric, renamed
    Chart renamed;
    renamed.name = chart.name;
    renamed.coords = names;
    renamed.domain = chart.domain;
    renamed.entries.resize(chart.entries.size());
    for (int i = 0; i < chart.dim(); ++i)
      for (int j = i; j < chart.dim(); ++j) {
        Expression e = Expression::parse(chart.entry(i, j).serialize_with(names), names);
        renamed.entries[static_cast<std::size_t>(i) * chart.dim() + j] = e;
        renamed.entries[static_cast<std::size_t>(j) * chart.dim() + i] = std::move(e);
      }
    chart = std::move(renamed);
  }
  if (const std::string* domain = sec.find("domain"))
    chart = chart.with_domain(parse_domain(sec, *domain, chart.dim()));
  return chart;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  std::vector<Section> sections = split_sections(text);

  std::map<std::string, Chart> charts;
  std::map<std::string, std::pair<std::string, std::string>> fields;  // name -> (chart, expr)
  std::map<std::string, int> field_lines;
  const Section* spec_sec = nullptr;
  const Section* sampling_sec = nullptr;
  const Section* tol_sec = nullptr;
  const Section* run_sec = nullptr;

  for (const Section& sec : sections) {
    if (sec.kind == "chart") {
      if (charts.count(sec.name)) fail_line(sec.line, "duplicate chart \"" + sec.name + "\"");
      charts[sec.name] = build_config_chart(sec);
    } else if (sec.kind == "field") {
      if (fields.count(sec.name)) fail_line(sec.line, "duplicate field \"" + sec.name + "\"");
      const std::string* chart = sec.find("chart");
      const std::string* expr = sec.find("expr");
      if (!chart || !expr)
        fail_line(sec.line, "field \"" + sec.name + "\" needs chart and expr keys");
      for (const auto& [k, v] : sec.kv)
        if (k != "chart" && k != "expr")
          fail_line(sec.kv_line.at(k), "unknown key \"" + k + "\" in field \"" + sec.name + "\"");
      fields[sec.name] = {*chart, *expr};
      field_lines[sec.name] = sec.line;
    } else if (sec.kind == "spec") {
      if (spec_sec) fail_line(sec.line, "duplicate [spec] section");
      spec_sec = &sec;
    } else if (sec.kind == "sampling") {
      if (sampling_sec) fail_line(sec.line, "duplicate [sampling] section");
      sampling_sec = &sec;
    } else if (sec.kind == "tolerances") {
      if (tol_sec) fail_line(sec.line, "duplicate [tolerances] section");
      tol_sec = &sec;
    } else if (sec.kind == "run") {
      if (run_sec) fail_line(sec.line, "duplicate [run] section");
      run_sec = &sec;
    }
  }

  if (!spec_sec) throw ValidationError("missing [spec] section");
  if (!run_sec) throw ValidationError("missing [run] section");

  auto resolve_field = [&](const std::string& key, const std::string& expect_chart_of)
      -> ScalarField {
    const std::string* fname = spec_sec->find(key);
    if (!fname) fail_line(spec_sec->line, "[spec] needs key \"" + key + "\"");
    auto it = fields.find(*fname);
    if (it == fields.end())
      fail_line(spec_sec->kv_line.at(key), "undefined field \"" + *fname + "\"");
    const auto& [chart_name, expr_src] = it->second;
    auto cit = charts.find(chart_name);
    if (cit == charts.end())
      fail_line(field_lines.at(*fname),
                "field \"" + *fname + "\" references undefined chart \"" + chart_name + "\"");
    if (!expect_chart_of.empty() && chart_name != expect_chart_of)
      fail_line(spec_sec->kv_line.at(key), "field \"" + *fname + "\" lives on chart \"" +
                                               chart_name + "\" but key \"" + key +
                                               "\" needs chart \"" + expect_chart_of + "\"");
    try {
      return ScalarField::on(cit->second, expr_src);
    } catch (const ParseError& e) {
      fail_line(field_lines.at(*fname), "field \"" + *fname + "\": " + e.what());
    }
  };

  const std::string* variant_s = spec_sec->find("variant");
  if (!variant_s) fail_line(spec_sec->line, "[spec] needs key \"variant\"");
  Variant variant;
  if (*variant_s == "G") variant = Variant::G;
  else if (*variant_s == "H") variant = Variant::H;
  else fail_line(spec_sec->kv_line.at("variant"), "variant must be G or H");

  const std::string* base_name = spec_sec->find("base");
  const std::string* fiber_name = spec_sec->find("fiber");
  if (!base_name || !fiber_name)
    fail_line(spec_sec->line, "[spec] needs base and fiber chart names");
  if (!charts.count(*base_name))
    fail_line(spec_sec->kv_line.at("base"), "undefined chart \"" + *base_name + "\"");
  if (!charts.count(*fiber_name))
    fail_line(spec_sec->kv_line.at("fiber"), "undefined chart \"" + *fiber_name + "\"");

  const std::string* c_s = spec_sec->find("c");
  if (!c_s) fail_line(spec_sec->line, "[spec] needs key \"c\"");
  double c = parse_double(*spec_sec, "c", *c_s);

  for (const auto& [k, v] : spec_sec->kv) {
    static const std::vector<std::string> ok = {"variant", "base", "fiber", "f1",
                                                "f2",      "c",    "phi1",  "phi2"};
    if (std::find(ok.begin(), ok.end(), k) == ok.end())
      fail_line(spec_sec->kv_line.at(k), "unknown key \"" + k + "\" in [spec]");
  }

  RunConfig cfg;
  ScalarField f1 = resolve_field("f1", *base_name);
  ScalarField f2 = resolve_field("f2", *fiber_name);
  cfg.spec = WarpSpec::make(variant, std::move(f1), std::move(f2), c);

  if (spec_sec->find("phi1")) {
    if (variant == Variant::G)
      fail_line(spec_sec->kv_line.at("phi1"),
                "phi overrides apply to variant H only; variant G compares the warping lifts");
    cfg.phi1 = resolve_field("phi1", *base_name);
  }
  if (spec_sec->find("phi2")) {
    if (variant == Variant::G)
      fail_line(spec_sec->kv_line.at("phi2"),
                "phi overrides apply to variant H only; variant G compares the warping lifts");
    cfg.phi2 = resolve_field("phi2", *fiber_name);
  }

  if (sampling_sec) {
    for (const auto& [k, v] : sampling_sec->kv) {
      if (k == "count") {
        double d = parse_double(*sampling_sec, k, v);
        if (d < 1 || d != std::floor(d))
          fail_line(sampling_sec->kv_line.at(k), "count must be a positive integer");
        cfg.sampling.count = static_cast<int>(d);
      } else if (k == "seed") {
        double d = parse_double(*sampling_sec, k, v);
        if (d < 0 || d != std::floor(d))
          fail_line(sampling_sec->kv_line.at(k), "seed must be a non-negative integer");
        cfg.sampling.seed = static_cast<std::uint64_t>(d);
      } else if (k == "margin") {
        double d = parse_double(*sampling_sec, k, v);
        if (!(d >= 0.0 && d < 0.5))
          fail_line(sampling_sec->kv_line.at(k), "margin must lie in [0, 0.5)");
        cfg.sampling.margin = d;
      } else {
        fail_line(sampling_sec->kv_line.at(k), "unknown key \"" + k + "\" in [sampling]");
      }
    }
  }

  if (tol_sec) {
    for (const auto& [k, v] : tol_sec->kv) {
      double d = parse_double(*tol_sec, k, v);
      try {
        cfg.tol.set(k, d);
      } catch (const ValidationError& e) {
        fail_line(tol_sec->kv_line.at(k), e.what());
      }
    }
  }

  const std::string* tasks_s = run_sec->find("tasks");
  if (!tasks_s) fail_line(run_sec->line, "[run] needs key \"tasks\"");
  cfg.tasks = split_ws(*tasks_s);
  if (cfg.tasks.empty()) fail_line(run_sec->kv_line.at("tasks"), "task list is empty");
  for (const std::string& t : cfg.tasks) {
    bool known = false;
    for (const char* k : kAllTasks) known = known || t == k;
    if (!known) fail_line(run_sec->kv_line.at("tasks"), "unknown task \"" + t + "\"");
  }
  for (const auto& [k, v] : run_sec->kv) {
    if (k == "tasks") continue;
    if (k == "out") {
      cfg.out_path = v;
    } else if (k == "oracle_curvature_g") {
      if (v == "on" || v == "true" || v == "1") cfg.oracle_curvature_g = true;
      else if (v == "off" || v == "false" || v == "0") cfg.oracle_curvature_g = false;
      else fail_line(run_sec->kv_line.at(k), "oracle_curvature_g must be on or off");
    } else {
      fail_line(run_sec->kv_line.at(k), "unknown key \"" + k + "\" in [run]");
    }
  }

  bool wants_curvature =
      std::find(cfg.tasks.begin(), cfg.tasks.end(), "curvature") != cfg.tasks.end();
  if (wants_curvature && cfg.spec.variant == Variant::G && !cfg.oracle_curvature_g)
    throw ValidationError(
        "curvature on variant G has no closed form; set oracle_curvature_g = on in [run] "
        "to record oracle-only values");
  if (wants_curvature && cfg.spec.dim() > 8)
    throw ValidationError("curvature task needs product dimension at most 8");

  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file \"" + path + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace warpgeo
