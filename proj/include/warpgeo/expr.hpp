#pragma once

// Scalar expressions over named variables: parser, serializer, and
// evaluation templated on the scalar type so the same tree yields values,
// gradients and Hessians (via nested duals) without re-parsing.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "warpgeo/dual.hpp"
#include "warpgeo/errors.hpp"
#include "warpgeo/linalg.hpp"

namespace warpgeo {

enum class NodeKind : std::uint8_t { Constant, Var, Add, Sub, Mul, Div, Pow, Neg, Call };

enum class Func : std::uint8_t { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Tanh };

struct Node {
  NodeKind kind = NodeKind::Constant;
  Func fn = Func::Sin;
  int a = -1, b = -1;      // child indices into the node pool
  double value = 0.0;      // Constant payload
  int var = -1;            // Var payload
  std::uint32_t offset = 0;  // byte offset in the source, for error messages
};

// value, gradient and full (symmetric) Hessian at a point
struct Jet2 {
  double value = 0.0;
  VecD grad;
  MatD hess;
};

class Expression {
 public:
  Expression() = default;

  // throws ParseError with a byte offset on malformed input or a name not in vars
  static Expression parse(std::string_view source, const std::vector<std::string>& vars);

  int arity() const { return static_cast<int>(vars_.size()); }
  const std::vector<std::string>& vars() const { return vars_; }
  const std::string& source() const { return source_; }
  bool empty() const { return root_ < 0; }

  // minimal-parenthesis form; parsing it back gives a structurally equal tree
  std::string serialize() const;
  // same tree rendered with substitute variable names
  std::string serialize_with(const std::vector<std::string>& names) const;
  bool structurally_equal(const Expression& other) const;

  template <class S>
  S eval(std::span<const S> x) const;

  double value(const VecD& x) const { return eval<double>(std::span<const double>(x)); }
  VecD gradient(const VecD& x) const;
  Jet2 jet2(const VecD& x) const;

 private:
  template <class S>
  S eval_node(int idx, std::span<const S> x) const;

  std::vector<std::string> vars_;
  std::vector<Node> nodes_;
  int root_ = -1;
  std::string source_;

  friend struct ExprParser;
};

template <class S>
S Expression::eval_node(int idx, std::span<const S> x) const {
  const Node& n = nodes_[idx];
  switch (n.kind) {
    case NodeKind::Constant:
      return S(n.value);
    case NodeKind::Var:
      return x[n.var];
    case NodeKind::Add:
      return eval_node<S>(n.a, x) + eval_node<S>(n.b, x);
    case NodeKind::Sub:
      return eval_node<S>(n.a, x) - eval_node<S>(n.b, x);
    case NodeKind::Mul:
      return eval_node<S>(n.a, x) * eval_node<S>(n.b, x);
    case NodeKind::Div: {
      S den = eval_node<S>(n.b, x);
      if (scalar_value(den) == 0.0) throw EvalError("division by zero", n.offset);
      return eval_node<S>(n.a, x) / den;
    }
    case NodeKind::Pow: {
      const Node& e = nodes_[n.b];
      if (e.kind == NodeKind::Constant && std::abs(e.value) <= 64.0 &&
          e.value == static_cast<long long>(e.value)) {
        // integer exponents use repeated multiplication, valid for any base
        S base = eval_node<S>(n.a, x);
        long long k = static_cast<long long>(e.value);
        if (k < 0 && scalar_value(base) == 0.0)
          throw EvalError("zero raised to a negative power", n.offset);
        return ipow(base, k);
      }
      S base = eval_node<S>(n.a, x);
      S expo = eval_node<S>(n.b, x);
      if (scalar_value(base) <= 0.0)
        throw EvalError("power with non-positive base and non-integer exponent", n.offset);
      return pow_general(base, expo);
    }
    case NodeKind::Neg:
      return -eval_node<S>(n.a, x);
    case NodeKind::Call: {
      S arg = eval_node<S>(n.a, x);
      try {
        switch (n.fn) {
          case Func::Sin: return sin(arg);
          case Func::Cos: return cos(arg);
          case Func::Tan: return tan(arg);
          case Func::Exp: return exp(arg);
          case Func::Log: return log(arg);
          case Func::Sqrt: return sqrt(arg);
          case Func::Sinh: return sinh(arg);
          case Func::Cosh: return cosh(arg);
          case Func::Tanh: return tanh(arg);
        }
      } catch (const EvalError& e) {
        throw EvalError(e.what(), n.offset);  // attach the call site
      }
      throw EvalError("unknown function", n.offset);
    }
  }
  throw EvalError("corrupt expression tree", n.offset);
}

template <class S>
S Expression::eval(std::span<const S> x) const {
  if (root_ < 0) throw EvalError("evaluating an empty expression", 0);
  if (x.size() != vars_.size())
    throw EvalError("wrong number of arguments for expression", 0);
  return eval_node<S>(root_, x);
}

}  // namespace warpgeo
