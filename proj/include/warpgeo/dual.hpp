#pragma once

// Forward-mode dual numbers, nestable: Dual<double> carries first partials,
// Dual<Dual<double>> second partials, and so on.  The partials vector is
// sized by the number of seeded directions; an empty vector means "no
// dependence", which keeps constants cheap at any nesting depth.

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "warpgeo/errors.hpp"

namespace warpgeo {

template <class S>
struct Dual {
  S v{};
  std::vector<S> d;

  Dual() : v(0.0) {}
  Dual(double c) : v(c) {}  // implicit: constants promote to any depth

  static Dual seeded(S value, std::size_t n, std::size_t dir) {
    Dual r;
    r.v = std::move(value);
    r.d.assign(n, S(0.0));
    r.d[dir] = S(1.0);
    return r;
  }
};

using D1 = Dual<double>;
using D2 = Dual<D1>;

// innermost double value, at any nesting depth
inline double scalar_value(double x) { return x; }
template <class S>
double scalar_value(const Dual<S>& x) {
  return scalar_value(x.v);
}

// i-th partial, treating the short vector as zero-padded
template <class S>
S partial(const Dual<S>& x, std::size_t i) {
  return i < x.d.size() ? x.d[i] : S(0.0);
}

// seed a vector of scalars so that direction i is coordinate i; composing the
// helper with itself yields second-order seeds, and so on
template <class S>
std::vector<Dual<S>> seed_dirs(std::span<const S> x) {
  std::vector<Dual<S>> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = Dual<S>::seeded(x[i], x.size(), i);
  }
  return out;
}

template <class S>
Dual<S> operator+(const Dual<S>& a, const Dual<S>& b) {
  Dual<S> r;
  r.v = a.v + b.v;
  std::size_t n = std::max(a.d.size(), b.d.size());
  r.d.reserve(n);
  for (std::size_t i = 0; i < n; ++i) r.d.push_back(partial(a, i) + partial(b, i));
  return r;
}

template <class S>
Dual<S> operator-(const Dual<S>& a, const Dual<S>& b) {
  Dual<S> r;
  r.v = a.v - b.v;
  std::size_t n = std::max(a.d.size(), b.d.size());
  r.d.reserve(n);
  for (std::size_t i = 0; i < n; ++i) r.d.push_back(partial(a, i) - partial(b, i));
  return r;
}

template <class S>
Dual<S> operator-(const Dual<S>& a) {
  Dual<S> r;
  r.v = -a.v;
  r.d.reserve(a.d.size());
  for (const S& dx : a.d) r.d.push_back(-dx);
  return r;
}

template <class S>
Dual<S> operator*(const Dual<S>& a, const Dual<S>& b) {
  Dual<S> r;
  r.v = a.v * b.v;
  std::size_t n = std::max(a.d.size(), b.d.size());
  r.d.reserve(n);
  for (std::size_t i = 0; i < n; ++i) r.d.push_back(partial(a, i) * b.v + a.v * partial(b, i));
  return r;
}

template <class S>
Dual<S> operator/(const Dual<S>& a, const Dual<S>& b) {
  Dual<S> r;
  r.v = a.v / b.v;
  std::size_t n = std::max(a.d.size(), b.d.size());
  r.d.reserve(n);
  // d(a/b) = (da - (a/b) db) / b
  for (std::size_t i = 0; i < n; ++i) r.d.push_back((partial(a, i) - r.v * partial(b, i)) / b.v);
  return r;
}

template <class S> Dual<S> operator+(const Dual<S>& a, double b) { return a + Dual<S>(b); }
template <class S> Dual<S> operator+(double a, const Dual<S>& b) { return Dual<S>(a) + b; }
template <class S> Dual<S> operator-(const Dual<S>& a, double b) { return a - Dual<S>(b); }
template <class S> Dual<S> operator-(double a, const Dual<S>& b) { return Dual<S>(a) - b; }
template <class S> Dual<S> operator*(const Dual<S>& a, double b) { return a * Dual<S>(b); }
template <class S> Dual<S> operator*(double a, const Dual<S>& b) { return Dual<S>(a) * b; }
template <class S> Dual<S> operator/(const Dual<S>& a, double b) { return a / Dual<S>(b); }
template <class S> Dual<S> operator/(double a, const Dual<S>& b) { return Dual<S>(a) / b; }

namespace detail {
// apply f with derivative df to x: chain rule over the partials
template <class S>
Dual<S> chain(const Dual<S>& x, S value, const S& deriv) {
  Dual<S> r;
  r.v = std::move(value);
  r.d.reserve(x.d.size());
  for (const S& dx : x.d) r.d.push_back(dx * deriv);
  return r;
}
}  // namespace detail

// double overloads so generic code can call these unqualified at depth zero;
// log and sqrt get the same domain checks the dual versions apply.
inline double sin(double x) { return std::sin(x); }
inline double cos(double x) { return std::cos(x); }
inline double tan(double x) { return std::tan(x); }
inline double exp(double x) { return std::exp(x); }
inline double sinh(double x) { return std::sinh(x); }
inline double cosh(double x) { return std::cosh(x); }
inline double tanh(double x) { return std::tanh(x); }
inline double log(double x) {
  if (x <= 0.0) throw EvalError("log of non-positive argument", 0);
  return std::log(x);
}
inline double sqrt(double x) {
  if (x < 0.0) throw EvalError("sqrt of negative argument", 0);
  return std::sqrt(x);
}

template <class S>
Dual<S> sin(const Dual<S>& x) {
  using std::cos;
  using std::sin;
  return detail::chain(x, sin(x.v), cos(x.v));
}

template <class S>
Dual<S> cos(const Dual<S>& x) {
  using std::cos;
  using std::sin;
  return detail::chain(x, cos(x.v), S(-1.0) * sin(x.v));
}

template <class S>
Dual<S> tan(const Dual<S>& x) {
  using std::tan;
  S t = tan(x.v);
  return detail::chain(x, t, S(1.0) + t * t);
}

template <class S>
Dual<S> exp(const Dual<S>& x) {
  using std::exp;
  S e = exp(x.v);
  return detail::chain(x, e, e);
}

template <class S>
Dual<S> log(const Dual<S>& x) {
  using std::log;
  if (scalar_value(x) <= 0.0) throw EvalError("log of non-positive argument", 0);
  return detail::chain(x, log(x.v), S(1.0) / x.v);
}

template <class S>
Dual<S> sqrt(const Dual<S>& x) {
  using std::sqrt;
  if (scalar_value(x) < 0.0) throw EvalError("sqrt of negative argument", 0);
  S s = sqrt(x.v);
  return detail::chain(x, s, S(0.5) / s);
}

template <class S>
Dual<S> sinh(const Dual<S>& x) {
  using std::cosh;
  using std::sinh;
  return detail::chain(x, sinh(x.v), cosh(x.v));
}

template <class S>
Dual<S> cosh(const Dual<S>& x) {
  using std::cosh;
  using std::sinh;
  return detail::chain(x, cosh(x.v), sinh(x.v));
}

template <class S>
Dual<S> tanh(const Dual<S>& x) {
  using std::tanh;
  S t = tanh(x.v);
  return detail::chain(x, t, S(1.0) - t * t);
}

// integer power by repeated multiplication; valid for any base sign.
// the double overload mirrors the dual one operation for operation so both
// evaluation paths round identically.
inline double ipow(double b, long long n) {
  bool neg = n < 0;
  unsigned long long k = neg ? static_cast<unsigned long long>(-n) : static_cast<unsigned long long>(n);
  double acc = 1.0;
  for (unsigned long long i = 0; i < k; ++i) acc = acc * b;
  return neg ? 1.0 / acc : acc;
}

template <class S>
Dual<S> ipow(const Dual<S>& b, long long n) {
  bool neg = n < 0;
  unsigned long long k = neg ? static_cast<unsigned long long>(-n) : static_cast<unsigned long long>(n);
  Dual<S> acc(1.0);
  for (unsigned long long i = 0; i < k; ++i) acc = acc * b;
  return neg ? Dual<S>(1.0) / acc : acc;
}

// general power via exp(b log a); requires a positive base.  kept as the
// same composition for double so values match the dual path bit for bit.
inline double pow_general(double a, double b) {
  if (a <= 0.0) throw EvalError("power with non-positive base and non-integer exponent", 0);
  return std::exp(b * std::log(a));
}

template <class S>
Dual<S> pow_general(const Dual<S>& a, const Dual<S>& b) {
  if (scalar_value(a) <= 0.0) throw EvalError("power with non-positive base and non-integer exponent", 0);
  return exp(b * log(a));
}

}  // namespace warpgeo
