#include "warpgeo/chart.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace warpgeo {

bool Chart::in_domain(const VecD& p) const {
  if (p.size() != coords.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (!(domain[i].first < p[i] && p[i] < domain[i].second)) return false;
  return true;
}

void Chart::require_in_domain(const VecD& p) const {
  if (p.size() != coords.size())
    throw DomainError("point has " + std::to_string(p.size()) + " coordinates, chart \"" +
                      name + "\" has " + std::to_string(coords.size()));
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(domain[i].first < p[i] && p[i] < domain[i].second)) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "coordinate %s = %g outside open interval (%g, %g) of chart \"%s\"",
                    coords[i].c_str(), p[i], domain[i].first, domain[i].second, name.c_str());
      throw DomainError(buf);
    }
  }
}

MatD Chart::metric_at(const VecD& p) const {
  MatD g = metric_eval<double>(std::span<const double>(p));
  if (!cholesky(g)) {
    char buf[120];
    std::snprintf(buf, sizeof buf,
                  "metric of chart \"%s\" not positive definite (smallest eigenvalue %.3e)",
                  name.c_str(), min_eigenvalue(g));
    throw NumericError(buf);
  }
  return g;
}

MetricJets1 Chart::metric_jets1(const VecD& p) const {
  int n = dim();
  std::vector<D1> x = seed_dirs<double>(std::span<const double>(p));
  Mat<D1> gd = metric_eval<D1>(std::span<const D1>(x));
  MetricJets1 jets;
  jets.g = MatD(n, n);
  jets.dg = Tens3(n, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      jets.g(i, j) = gd(i, j).v;
      for (int a = 0; a < n; ++a) jets.dg(a, i, j) = partial(gd(i, j), a);
    }
  return jets;
}

MetricJets2 Chart::metric_jets2(const VecD& p) const {
  int n = dim();
  std::vector<D1> lv1 = seed_dirs<double>(std::span<const double>(p));
  std::vector<D2> lv2 = seed_dirs<D1>(std::span<const D1>(lv1));
  Mat<D2> gd = metric_eval<D2>(std::span<const D2>(lv2));
  MetricJets2 jets;
  jets.g = MatD(n, n);
  jets.dg = Tens3(n, n, n);
  jets.ddg = Tens4(n, n, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const D2& e = gd(i, j);
      jets.g(i, j) = e.v.v;
      for (int a = 0; a < n; ++a) {
        D1 da = partial(e, a);
        jets.dg(a, i, j) = da.v;
        for (int b = 0; b < n; ++b) jets.ddg(a, b, i, j) = partial(da, b);
      }
    }
  return jets;
}

MetricField Chart::metric_field(bool fd) const {
  MetricField mf;
  mf.dim = dim();
  Chart self = *this;
  mf.value = [self](const VecD& p) { return self.metric_at(p); };
  if (!fd) {
    Chart s1 = *this;
    mf.jet1 = [s1](const VecD& p) { return s1.metric_jets1(p); };
    Chart s2 = *this;
    mf.jet2 = [s2](const VecD& p) { return s2.metric_jets2(p); };
  }
  return mf;
}

Chart Chart::with_domain(std::vector<std::pair<double, double>> box) const {
  if (box.size() != coords.size())
    throw ValidationError("domain size does not match chart dimension");
  for (const auto& [lo, hi] : box)
    if (!(lo < hi)) throw ValidationError("empty domain interval");
  Chart c = *this;
  c.domain = std::move(box);
  return c;
}

namespace {

Chart build_chart(std::string name, std::vector<std::string> coords,
                  std::vector<std::pair<double, double>> domain,
                  const std::vector<std::string>& entry_sources) {
  Chart c;
  c.name = std::move(name);
  c.coords = std::move(coords);
  c.domain = std::move(domain);
  int n = c.dim();
  c.entries.resize(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const std::string& src = entry_sources[static_cast<std::size_t>(i) * n + j];
      Expression e = Expression::parse(src.empty() ? "0" : src, c.coords);
      c.entries[static_cast<std::size_t>(i) * n + j] = e;
      c.entries[static_cast<std::size_t>(j) * n + i] = std::move(e);
    }
  return c;
}

}  // namespace

Chart euclidean_chart(int n, const std::string& prefix) {
  if (n < 1 || n > 8) throw ValidationError("euclidean chart dimension must be in 1..8");
  std::vector<std::string> coords;
  for (int i = 1; i <= n; ++i) coords.push_back(prefix + std::to_string(i));
  std::vector<std::pair<double, double>> domain(n, {0.5, 4.0});
  std::vector<std::string> entries(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) entries[static_cast<std::size_t>(i) * n + i] = "1";
  return build_chart("euclidean:" + std::to_string(n), std::move(coords), std::move(domain),
                     entries);
}

Chart sphere2_chart() {
  const double pi = std::numbers::pi;
  return build_chart("sphere2", {"theta", "phi"}, {{0.0, pi}, {-pi, pi}},
                     {"1", "", "", "sin(theta)^2"});
}

Chart halfplane2_chart() {
  return build_chart("halfplane2", {"x", "y"}, {{-4.0, 4.0}, {0.25, 4.0}},
                     {"1/y^2", "", "", "1/y^2"});
}

Chart custom_chart(const std::string& name, std::vector<std::string> coords,
                   std::vector<std::pair<double, double>> domain,
                   const std::vector<std::string>& entry_sources) {
  std::size_t n = coords.size();
  if (n == 0 || n > 8) throw ValidationError("custom chart dimension must be in 1..8");
  if (domain.size() != n) throw ValidationError("custom chart needs one domain interval per coordinate");
  for (const auto& [lo, hi] : domain)
    if (!(lo < hi)) throw ValidationError("empty domain interval in custom chart");
  if (entry_sources.size() != n * n)
    throw ValidationError("custom chart needs a dim*dim entry table");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (!entry_sources[i * n + j].empty())
        throw ValidationError("custom chart entries must fill only the upper triangle");
  return build_chart(name, std::move(coords), std::move(domain), entry_sources);
}

Chart chart_from_catalog(const std::string& id) {
  if (id == "sphere2") return sphere2_chart();
  if (id == "halfplane2") return halfplane2_chart();
  if (id.rfind("euclidean:", 0) == 0) {
    std::string rest = id.substr(10);
    std::string prefix = "x";
    std::size_t colon = rest.find(':');
    if (colon != std::string::npos) {
      prefix = rest.substr(colon + 1);
      rest = rest.substr(0, colon);
    }
    if (rest.empty() || prefix.empty())
      throw ValidationError("bad euclidean chart id \"" + id + "\"");
    for (char c : rest)
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw ValidationError("bad euclidean chart id \"" + id + "\"");
    return euclidean_chart(std::stoi(rest), prefix);
  }
  throw ValidationError("unknown chart \"" + id +
                        "\"; known: euclidean:N, sphere2, halfplane2");
}

std::vector<std::string> catalog_ids() { return {"euclidean:N", "sphere2", "halfplane2"}; }

ScalarField ScalarField::on(const Chart& chart, std::string_view source) {
  ScalarField f;
  f.chart = chart;
  f.expr = Expression::parse(source, chart.coords);
  return f;
}

VecD grad_vec(const ScalarField& f, const VecD& p) {
  VecD df = f.expr.gradient(p);
  LuFactors<double> lu = lu_factor(f.chart.metric_at(p));
  return solve_lu(lu, df);
}

double grad_norm_sq(const ScalarField& f, const VecD& p) {
  VecD df = f.expr.gradient(p);
  LuFactors<double> lu = lu_factor(f.chart.metric_at(p));
  VecD up = solve_lu(lu, df);
  return dot(df, up);
}

MatD covariant_hessian(const ScalarField& f, const VecD& p) {
  Jet2 jet = f.expr.jet2(p);
  Tens3 gamma = christoffel(f.chart.metric_field(), p);
  int n = f.chart.dim();
  MatD h(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v = jet.hess(i, j);
      for (int k = 0; k < n; ++k) v -= gamma(k, i, j) * jet.grad[k];
      h(i, j) = v;
    }
  return h;
}

VecD grad_b_partials(const ScalarField& f, const VecD& p) {
  int n = f.chart.dim();
  MetricJets1 jets = f.chart.metric_jets1(p);
  MatD ginv = inverse(jets.g);
  Jet2 jet = f.expr.jet2(p);
  // d_a g^{kl} = -g^{km} (d_a g_{mn}) g^{nl}
  VecD out(n, 0.0);
  for (int a = 0; a < n; ++a) {
    double s = 0.0;
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        double dginv = 0.0;
        for (int m = 0; m < n; ++m)
          for (int q = 0; q < n; ++q) dginv -= ginv(k, m) * jets.dg(a, m, q) * ginv(q, l);
        s += dginv * jet.grad[k] * jet.grad[l];
        s += 2.0 * ginv(k, l) * jet.hess(a, k) * jet.grad[l];
      }
    out[a] = s;
  }
  return out;
}

double grad_f_of_b(const ScalarField& f, const VecD& p) {
  VecD db = grad_b_partials(f, p);
  VecD up = grad_vec(f, p);
  return dot(db, up);
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97f4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double frac(double x) { return x - std::floor(x); }

}  // namespace

std::vector<VecD> sample_box(const std::vector<std::pair<double, double>>& box, int count,
                             std::uint64_t seed, double margin_frac) {
  // additive Weyl recurrence: x_k = frac(offset + k * alpha) with alpha the
  // fractional parts of square roots of primes; offsets come from the seed
  static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
  std::size_t n = box.size();
  if (n > std::size(primes)) throw ValidationError("sample_box supports at most 16 dimensions");
  if (count < 0) throw ValidationError("negative sample count");
  if (!(margin_frac >= 0.0 && margin_frac < 0.5))
    throw ValidationError("sampling margin must lie in [0, 0.5)");
  std::vector<double> alpha(n), offset(n);
  std::uint64_t state = seed;
  for (std::size_t i = 0; i < n; ++i) {
    alpha[i] = frac(std::sqrt(static_cast<double>(primes[i])));
    offset[i] = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
  }
  std::vector<VecD> pts(count, VecD(n));
  for (int k = 0; k < count; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      double lo = box[i].first, hi = box[i].second;
      double m = margin_frac * (hi - lo);
      double u = frac(offset[i] + (k + 1) * alpha[i]);
      pts[k][i] = lo + m + u * (hi - lo - 2.0 * m);
    }
  }
  return pts;
}

}  // namespace warpgeo
