#include "warpgeo/expr.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace warpgeo {

namespace {

enum class Tok : std::uint8_t {
  Number, Name, Plus, Minus, Star, Slash, Caret, LParen, RParen, End
};

struct Token {
  Tok kind = Tok::End;
  std::uint32_t offset = 0;
  double number = 0.0;
  std::string_view text;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    Token t;
    t.offset = static_cast<std::uint32_t>(i);
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = src.data() + i;
      char* end = nullptr;
      errno = 0;
      double v = std::strtod(begin, &end);
      if (end == begin)
        throw ParseError("malformed number at offset " + std::to_string(i), i);
      t.kind = Tok::Number;
      t.number = v;
      std::size_t len = static_cast<std::size_t>(end - begin);
      if (i + len > src.size()) len = src.size() - i;  // strtod reads past the view only if not NUL-terminated; sources are
      t.text = src.substr(i, len);
      i += len;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      t.kind = Tok::Name;
      t.text = src.substr(i, j - i);
      i = j;
    } else {
      switch (c) {
        case '+': t.kind = Tok::Plus; break;
        case '-': t.kind = Tok::Minus; break;
        case '*': t.kind = Tok::Star; break;
        case '/': t.kind = Tok::Slash; break;
        case '^': t.kind = Tok::Caret; break;
        case '(': t.kind = Tok::LParen; break;
        case ')': t.kind = Tok::RParen; break;
        default:
          throw ParseError(std::string("unexpected character '") + c + "' at offset " +
                               std::to_string(i),
                           i);
      }
      ++i;
    }
    out.push_back(t);
  }
  Token end_tok;
  end_tok.kind = Tok::End;
  end_tok.offset = static_cast<std::uint32_t>(src.size());
  out.push_back(end_tok);
  return out;
}

bool func_from_name(std::string_view name, Func* out) {
  struct Entry {
    const char* name;
    Func fn;
  };
  static constexpr Entry table[] = {
      {"sin", Func::Sin},   {"cos", Func::Cos},   {"tan", Func::Tan},
      {"exp", Func::Exp},   {"log", Func::Log},   {"sqrt", Func::Sqrt},
      {"sinh", Func::Sinh}, {"cosh", Func::Cosh}, {"tanh", Func::Tanh},
  };
  for (const Entry& e : table) {
    if (name == e.name) {
      *out = e.fn;
      return true;
    }
  }
  return false;
}

const char* func_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Tan: return "tan";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sqrt: return "sqrt";
    case Func::Sinh: return "sinh";
    case Func::Cosh: return "cosh";
    case Func::Tanh: return "tanh";
  }
  return "?";
}

}  // namespace

struct ExprParser {
  const std::vector<Token>& toks;
  std::size_t pos = 0;
  Expression& e;

  const Token& peek() const { return toks[pos]; }
  Token take() { return toks[pos++]; }

  [[noreturn]] static void fail(const Token& t, const std::string& what) {
    throw ParseError(what + " at offset " + std::to_string(t.offset), t.offset);
  }

  int push(Node n) {
    e.nodes_.push_back(n);
    return static_cast<int>(e.nodes_.size() - 1);
  }

  int make_binary(NodeKind kind, int a, int b, std::uint32_t off) {
    Node n;
    n.kind = kind;
    n.a = a;
    n.b = b;
    n.offset = off;
    return push(n);
  }

  // unary minus of a literal folds into the constant, so "x^-2" keeps an
  // integer exponent node
  int make_neg(int child, std::uint32_t off) {
    if (e.nodes_[child].kind == NodeKind::Constant) {
      e.nodes_[child].value = -e.nodes_[child].value;
      e.nodes_[child].offset = off;
      return child;
    }
    Node n;
    n.kind = NodeKind::Neg;
    n.a = child;
    n.offset = off;
    return push(n);
  }

  int parse_expr() {
    int lhs = parse_term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      Token op = take();
      int rhs = parse_term();
      lhs = make_binary(op.kind == Tok::Plus ? NodeKind::Add : NodeKind::Sub, lhs, rhs,
                        op.offset);
    }
    return lhs;
  }

  int parse_term() {
    int lhs = parse_unary();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      Token op = take();
      int rhs = parse_unary();
      lhs = make_binary(op.kind == Tok::Star ? NodeKind::Mul : NodeKind::Div, lhs, rhs,
                        op.offset);
    }
    return lhs;
  }

  int parse_unary() {
    if (peek().kind == Tok::Minus) {
      Token op = take();
      int child = parse_unary();
      return make_neg(child, op.offset);
    }
    return parse_power();
  }

  int parse_power() {
    int base = parse_primary();
    if (peek().kind == Tok::Caret) {
      Token op = take();
      int expo = parse_unary();  // right-associative, allows "x^-2"
      return make_binary(NodeKind::Pow, base, expo, op.offset);
    }
    return base;
  }

  int parse_primary() {
    Token t = take();
    switch (t.kind) {
      case Tok::Number: {
        Node n;
        n.kind = NodeKind::Constant;
        n.value = t.number;
        n.offset = t.offset;
        return push(n);
      }
      case Tok::Name: {
        Func fn;
        if (peek().kind == Tok::LParen) {
          if (!func_from_name(t.text, &fn))
            fail(t, "unknown function \"" + std::string(t.text) + "\"");
          take();  // '('
          int arg = parse_expr();
          if (peek().kind != Tok::RParen) fail(peek(), "expected ')'");
          take();
          Node n;
          n.kind = NodeKind::Call;
          n.fn = fn;
          n.a = arg;
          n.offset = t.offset;
          return push(n);
        }
        for (std::size_t i = 0; i < e.vars_.size(); ++i) {
          if (t.text == e.vars_[i]) {
            Node n;
            n.kind = NodeKind::Var;
            n.var = static_cast<int>(i);
            n.offset = t.offset;
            return push(n);
          }
        }
        fail(t, "undeclared variable \"" + std::string(t.text) + "\"");
      }
      case Tok::LParen: {
        int inner = parse_expr();
        if (peek().kind != Tok::RParen) fail(peek(), "expected ')'");
        take();
        return inner;
      }
      case Tok::End:
        fail(t, "unexpected end of input");
      default:
        fail(t, "unexpected token");
    }
  }
};

Expression Expression::parse(std::string_view source, const std::vector<std::string>& vars) {
  Expression e;
  e.vars_ = vars;
  e.source_ = std::string(source);
  // lex the stored copy: std::string guarantees a NUL terminator for strtod
  std::vector<Token> toks = lex(e.source_);
  ExprParser p{toks, 0, e};
  e.root_ = p.parse_expr();
  if (p.peek().kind != Tok::End) ExprParser::fail(p.peek(), "unexpected token");
  return e;
}

namespace {

// serialization precedence; a folded negative constant prints with its sign,
// so it binds like a unary minus
int eff_prec(const std::vector<Node>& nodes, int idx) {
  const Node& n = nodes[idx];
  switch (n.kind) {
    case NodeKind::Add:
    case NodeKind::Sub: return 1;
    case NodeKind::Mul:
    case NodeKind::Div: return 2;
    case NodeKind::Neg: return 3;
    case NodeKind::Pow: return 4;
    case NodeKind::Constant: return n.value < 0 ? 3 : 5;
    default: return 5;
  }
}

void write_number(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void serialize_node(const std::vector<Node>& nodes, const std::vector<std::string>& vars,
                    int idx, std::string& out) {
  const Node& n = nodes[idx];
  auto child = [&](int c, bool parens) {
    if (parens) out += '(';
    serialize_node(nodes, vars, c, out);
    if (parens) out += ')';
  };
  switch (n.kind) {
    case NodeKind::Constant:
      write_number(out, n.value);
      break;
    case NodeKind::Var:
      out += vars[n.var];
      break;
    case NodeKind::Add:
    case NodeKind::Sub:
    case NodeKind::Mul:
    case NodeKind::Div: {
      int p = (n.kind == NodeKind::Add || n.kind == NodeKind::Sub) ? 1 : 2;
      const char* op = n.kind == NodeKind::Add   ? " + "
                       : n.kind == NodeKind::Sub ? " - "
                       : n.kind == NodeKind::Mul ? "*"
                                                 : "/";
      child(n.a, eff_prec(nodes, n.a) < p);
      out += op;
      // left-associative: an equal-precedence right child needs parentheses
      child(n.b, eff_prec(nodes, n.b) <= p);
      break;
    }
    case NodeKind::Pow:
      child(n.a, eff_prec(nodes, n.a) <= 4);
      out += '^';
      child(n.b, eff_prec(nodes, n.b) < 3);
      break;
    case NodeKind::Neg:
      out += '-';
      child(n.a, eff_prec(nodes, n.a) < 3);
      break;
    case NodeKind::Call:
      out += func_name(n.fn);
      out += '(';
      serialize_node(nodes, vars, n.a, out);
      out += ')';
      break;
  }
}

bool nodes_equal(const std::vector<Node>& an, int ai, const std::vector<Node>& bn, int bi) {
  const Node& a = an[ai];
  const Node& b = bn[bi];
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::Constant: return a.value == b.value;
    case NodeKind::Var: return a.var == b.var;
    case NodeKind::Neg: return nodes_equal(an, a.a, bn, b.a);
    case NodeKind::Call: return a.fn == b.fn && nodes_equal(an, a.a, bn, b.a);
    default:
      return nodes_equal(an, a.a, bn, b.a) && nodes_equal(an, a.b, bn, b.b);
  }
}

}  // namespace

std::string Expression::serialize() const {
  if (root_ < 0) return "";
  std::string out;
  serialize_node(nodes_, vars_, root_, out);
  return out;
}

std::string Expression::serialize_with(const std::vector<std::string>& names) const {
  if (names.size() != vars_.size())
    throw ValidationError("serialize_with: expected " + std::to_string(vars_.size()) +
                          " names, got " + std::to_string(names.size()));
  if (root_ < 0) return "";
  std::string out;
  serialize_node(nodes_, names, root_, out);
  return out;
}

bool Expression::structurally_equal(const Expression& other) const {
  if (root_ < 0 || other.root_ < 0) return root_ < 0 && other.root_ < 0;
  if (vars_ != other.vars_) return false;
  return nodes_equal(nodes_, root_, other.nodes_, other.root_);
}

VecD Expression::gradient(const VecD& x) const {
  std::vector<D1> seeded = seed_dirs<double>(std::span<const double>(x));
  D1 r = eval<D1>(std::span<const D1>(seeded));
  VecD g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = partial(r, i);
  return g;
}

Jet2 Expression::jet2(const VecD& x) const {
  std::vector<D1> lv1 = seed_dirs<double>(std::span<const double>(x));
  std::vector<D2> lv2 = seed_dirs<D1>(std::span<const D1>(lv1));
  D2 r = eval<D2>(std::span<const D2>(lv2));
  std::size_t m = x.size();
  Jet2 jet;
  jet.value = r.v.v;
  jet.grad.resize(m);
  jet.hess = MatD(static_cast<int>(m), static_cast<int>(m));
  for (std::size_t j = 0; j < m; ++j) {
    D1 dj = partial(r, j);
    jet.grad[j] = dj.v;
    for (std::size_t i = 0; i < m; ++i)
      jet.hess(static_cast<int>(i), static_cast<int>(j)) = partial(dj, i);
  }
  return jet;
}

}  // namespace warpgeo
