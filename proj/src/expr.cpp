#include "wcospec/expr.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "wcospec/error.hpp"

namespace wcospec {

enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, IntPow, Exp, Log, Pow };

struct ExprNode {
  Op op = Op::Const;
  cd value{};  // constant, or exponent of Pow
  long n = 0;  // IntPow exponent
  std::shared_ptr<const ExprNode> lhs, rhs;

  // Branch data for Log and Pow, fixed at construction.
  bool boundary = false;
  cd anchor{};       // c in c ± X
  double sign = 1;   // ±
  std::shared_ptr<const ExprNode> inner;  // X
  cd log_anchor{};   // Log c, or Log base(0) in the generic case
};

using NodePtr = std::shared_ptr<const ExprNode>;

namespace {

cd eval(const ExprNode& e, cd z);

cd eval(const ExprNode& e, cd z) {
  switch (e.op) {
    case Op::Const: return e.value;
    case Op::Var: return z;
    case Op::Add: return eval(*e.lhs, z) + eval(*e.rhs, z);
    case Op::Sub: return eval(*e.lhs, z) - eval(*e.rhs, z);
    case Op::Mul: return eval(*e.lhs, z) * eval(*e.rhs, z);
    case Op::Div: return eval(*e.lhs, z) / eval(*e.rhs, z);
    case Op::Neg: return -eval(*e.lhs, z);
    case Op::IntPow: {
      const cd x = eval(*e.lhs, z);
      cd r = 1.0, base = e.n < 0 ? 1.0 / x : x;
      for (unsigned long k = static_cast<unsigned long>(std::labs(e.n)); k; k >>= 1) {
        if (k & 1UL) r *= base;
        base *= base;
      }
      return r;
    }
    case Op::Exp: return std::exp(eval(*e.lhs, z));
    case Op::Log:
    case Op::Pow: {
      cd lg;
      if (e.boundary) {
        lg = e.log_anchor + std::log(1.0 + e.sign * eval(*e.inner, z) / e.anchor);
      } else {
        lg = e.log_anchor + std::log(eval(*e.lhs, z) / e.anchor);
      }
      return e.op == Op::Log ? lg : std::exp(e.value * lg);
    }
  }
  return {};
}

bool is_const(const NodePtr& p) { return p->op == Op::Const; }

NodePtr make_const(cd v) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Const;
  n->value = v;
  return n;
}

NodePtr make_var() {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Var;
  return n;
}

NodePtr make_binary(Op op, NodePtr l, NodePtr r) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  if (is_const(n->lhs) && is_const(n->rhs)) return make_const(eval(*n, 0.0));
  return n;
}

NodePtr make_unary(Op op, NodePtr x, long k = 0) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->lhs = std::move(x);
  n->n = k;
  if (is_const(n->lhs)) return make_const(eval(*n, 0.0));
  return n;
}

// Recognizes base = c + X, X + c, c - X or X - c with |c| = 1.
void detect_boundary(ExprNode& n, const NodePtr& base) {
  auto unit = [](const NodePtr& p) { return is_const(p) && std::abs(std::abs(p->value) - 1.0) < 1e-12; };
  if (base->op == Op::Add || base->op == Op::Sub) {
    const bool sub = base->op == Op::Sub;
    if (unit(base->lhs) && !is_const(base->rhs)) {
      n.boundary = true;
      n.anchor = base->lhs->value;
      n.sign = sub ? -1.0 : 1.0;
      n.inner = base->rhs;
    } else if (unit(base->rhs) && !is_const(base->lhs)) {
      n.boundary = true;
      // X - c = (-c) + X
      n.anchor = sub ? -base->rhs->value : base->rhs->value;
      n.sign = 1.0;
      n.inner = base->lhs;
    }
  }
}

NodePtr make_branch(Op op, NodePtr base, cd s) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->value = s;
  n->lhs = base;
  if (is_const(base)) {
    if (base->value == cd{})
      throw Error(ErrorKind::BranchUndefined, op == Op::Log ? "log(0)" : "pow with zero base");
    const cd lg = std::log(base->value);
    return make_const(op == Op::Log ? lg : std::exp(s * lg));
  }
  detect_boundary(*n, base);
  if (n->boundary) {
    n->log_anchor = std::log(n->anchor);
  } else {
    const cd b0 = eval(*base, 0.0);
    if (b0 == cd{} || !std::isfinite(std::abs(b0)))
      throw Error(ErrorKind::BranchUndefined,
                  std::string(op == Op::Log ? "log" : "pow") + " argument must be finite and nonzero at z = 0");
    n->anchor = b0;
    n->log_anchor = std::log(b0);
  }
  return n;
}

TaylorSeries series(const ExprNode& e, std::size_t N) {
  switch (e.op) {
    case Op::Const: return TaylorSeries::constant(e.value, N);
    case Op::Var: return TaylorSeries::identity(N).resized(N);
    case Op::Add: return add(series(*e.lhs, N), series(*e.rhs, N));
    case Op::Sub: return sub(series(*e.lhs, N), series(*e.rhs, N));
    case Op::Mul: return mul(series(*e.lhs, N), series(*e.rhs, N));
    case Op::Div: return divide(series(*e.lhs, N), series(*e.rhs, N));
    case Op::Neg: return scale(series(*e.lhs, N), -1.0);
    case Op::IntPow: return integer_power(series(*e.lhs, N), e.n);
    case Op::Exp: return exp_series(series(*e.lhs, N));
    case Op::Log:
    case Op::Pow: {
      TaylorSeries unit_arg;
      if (e.boundary) {
        unit_arg = scale(series(*e.inner, N), e.sign / e.anchor);
        unit_arg[0] += 1.0;
      } else {
        unit_arg = scale(series(*e.lhs, N), 1.0 / e.anchor);
      }
      if (e.op == Op::Log) {
        TaylorSeries l = log_series(unit_arg);
        l[0] += e.log_anchor;
        return l;
      }
      return scale(power(unit_arg, e.value), std::exp(e.value * e.log_anchor));
    }
  }
  return TaylorSeries(N);
}

NodePtr substitute(const NodePtr& e, const NodePtr& repl) {
  switch (e->op) {
    case Op::Const: return e;
    case Op::Var: return repl;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: return make_binary(e->op, substitute(e->lhs, repl), substitute(e->rhs, repl));
    case Op::Neg:
    case Op::IntPow:
    case Op::Exp: return make_unary(e->op, substitute(e->lhs, repl), e->n);
    case Op::Log:
    case Op::Pow: return make_branch(e->op, substitute(e->lhs, repl), e->value);
  }
  return e;
}

bool equal(const ExprNode& x, const ExprNode& y) {
  if (x.op != y.op) return false;
  switch (x.op) {
    case Op::Const: return x.value == y.value;
    case Op::Var: return true;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: return equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
    case Op::Neg:
    case Op::Exp:
    case Op::Log: return equal(*x.lhs, *y.lhs);
    case Op::IntPow: return x.n == y.n && equal(*x.lhs, *y.lhs);
    case Op::Pow: return x.value == y.value && equal(*x.lhs, *y.lhs);
  }
  return false;
}

bool boundary_at(const ExprNode& e, cd c, double tol) {
  if ((e.op == Op::Log || e.op == Op::Pow) && e.boundary) {
    // c ± X vanishes where X = ∓c; for X = z that is the point -sign*c.
    if (std::abs(-e.sign * e.anchor - c) < tol || e.inner->op != Op::Var) return true;
  }
  if (e.lhs && boundary_at(*e.lhs, c, tol)) return true;
  if (e.rhs && boundary_at(*e.rhs, c, tol)) return true;
  return false;
}

// ---------------------------------------------------------------- printing

std::string fmt_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string fmt_const(cd v, bool& needs_parens) {
  const double re = v.real(), im = v.imag();
  needs_parens = true;
  if (im == 0.0) {
    needs_parens = std::signbit(re);
    return fmt_double(re);
  }
  if (re == 0.0) {
    needs_parens = std::signbit(im);
    return fmt_double(im) + "i";
  }
  return fmt_double(re) + (std::signbit(im) ? "-" : "+") + fmt_double(std::abs(im)) + "i";
}

int precedence(const ExprNode& e) {
  switch (e.op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::IntPow: return 4;
    case Op::Const: {
      bool p = false;
      fmt_const(e.value, p);
      return p ? 1 : 5;
    }
    default: return 5;
  }
}

void print(const ExprNode& e, int min_prec, std::string& out) {
  const int prec = precedence(e);
  const bool paren = prec < min_prec;
  if (paren) out += '(';
  switch (e.op) {
    case Op::Const: {
      bool p = false;
      out += fmt_const(e.value, p);
      break;
    }
    case Op::Var: out += 'z'; break;
    case Op::Add:
    case Op::Sub:
      print(*e.lhs, 1, out);
      out += e.op == Op::Add ? " + " : " - ";
      print(*e.rhs, 2, out);
      break;
    case Op::Mul:
    case Op::Div:
      print(*e.lhs, 2, out);
      out += e.op == Op::Mul ? "*" : "/";
      print(*e.rhs, 3, out);
      break;
    case Op::Neg:
      out += '-';
      print(*e.lhs, 3, out);
      break;
    case Op::IntPow:
      print(*e.lhs, 5, out);
      out += '^';
      out += std::to_string(e.n);
      break;
    case Op::Exp:
    case Op::Log:
      out += e.op == Op::Exp ? "exp(" : "log(";
      print(*e.lhs, 0, out);
      out += ')';
      break;
    case Op::Pow: {
      out += "pow(";
      print(*e.lhs, 0, out);
      out += ", ";
      bool p = false;
      out += fmt_const(e.value, p);
      out += ')';
      break;
    }
  }
  if (paren) out += ')';
}

// ----------------------------------------------------------------- parsing

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  NodePtr parse_all() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::SyntaxError, msg + " at position " + std::to_string(pos_),
                static_cast<long>(pos_));
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    NodePtr l = term();
    for (;;) {
      if (accept('+')) l = make_binary(Op::Add, l, term());
      else if (accept('-')) l = make_binary(Op::Sub, l, term());
      else return l;
    }
  }

  NodePtr term() {
    NodePtr l = unary();
    for (;;) {
      if (accept('*')) l = make_binary(Op::Mul, l, unary());
      else if (accept('/')) l = make_binary(Op::Div, l, unary());
      else return l;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make_unary(Op::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  long integer_exponent() {
    skip_ws();
    const bool paren = accept('(');
    bool neg = accept('-');
    if (!neg) accept('+');
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("integer exponent expected after '^' (use pow(base, s) for other exponents)");
    if (pos_ < s_.size() && (s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E' || s_[pos_] == 'i'))
      fail("only integer exponents are allowed after '^'; use pow(base, s)");
    long v = 0;
    std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (paren) expect(')');
    return neg ? -v : v;
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) {
      const long n = integer_exponent();
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == '^') fail("chained '^' is ambiguous; add parentheses");
      return make_unary(Op::IntPow, base, n);
    }
    return base;
  }

  std::vector<NodePtr> arguments(const std::string& name, std::size_t arity, std::size_t call_pos) {
    expect('(');
    std::vector<NodePtr> args;
    skip_ws();
    if (!accept(')')) {
      args.push_back(expr());
      while (accept(',')) args.push_back(expr());
      expect(')');
    }
    if (args.size() != arity)
      throw Error(ErrorKind::ArityError,
                  name + " expects " + std::to_string(arity) + " argument(s), got " +
                      std::to_string(args.size()) + " at position " + std::to_string(call_pos),
                  static_cast<long>(call_pos));
    return args;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string id(s_.substr(start, pos_ - start));
      if (id == "z") return make_var();
      if (id == "i") return make_const(cd(0.0, 1.0));
      if (id == "pi") return make_const(std::numbers::pi);
      if (id == "exp") return make_unary(Op::Exp, arguments(id, 1, start)[0]);
      if (id == "log") return make_branch(Op::Log, arguments(id, 1, start)[0], 0.0);
      if (id == "pow") {
        auto args = arguments(id, 2, start);
        if (!is_const(args[1])) {
          pos_ = start;
          fail("pow exponent must be a constant");
        }
        return make_branch(Op::Pow, args[0], args[1]->value);
      }
      pos_ = start;
      fail("unknown identifier '" + id + "'");
    }
    if (accept('(')) {
      NodePtr e = expr();
      expect(')');
      return e;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
        pos_ = p;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (ec != std::errc() || ptr != s_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    if (pos_ < s_.size() && s_[pos_] == 'i' &&
        !(pos_ + 1 < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])) || s_[pos_ + 1] == '_'))) {
      ++pos_;
      return make_const(cd(0.0, v));
    }
    return make_const(v);
  }
};

}  // namespace

struct ExprBuilder {
  static WeightExpr wrap(NodePtr p) { return WeightExpr(std::move(p)); }
  static const NodePtr& root(const WeightExpr& e) { return e.root_; }
};

WeightExpr::WeightExpr() : root_(make_const(0.0)) {}

WeightExpr WeightExpr::constant(cd value) { return WeightExpr(make_const(value)); }
WeightExpr WeightExpr::variable() { return WeightExpr(make_var()); }

WeightExpr operator+(const WeightExpr& l, const WeightExpr& r) {
  return ExprBuilder::wrap(make_binary(Op::Add, l.root_, r.root_));
}
WeightExpr operator-(const WeightExpr& l, const WeightExpr& r) {
  return ExprBuilder::wrap(make_binary(Op::Sub, l.root_, r.root_));
}
WeightExpr operator*(const WeightExpr& l, const WeightExpr& r) {
  return ExprBuilder::wrap(make_binary(Op::Mul, l.root_, r.root_));
}
WeightExpr operator/(const WeightExpr& l, const WeightExpr& r) {
  return ExprBuilder::wrap(make_binary(Op::Div, l.root_, r.root_));
}
WeightExpr operator-(const WeightExpr& x) { return ExprBuilder::wrap(make_unary(Op::Neg, x.root_)); }
WeightExpr WeightExpr::ipow(const WeightExpr& x, long n) { return WeightExpr(make_unary(Op::IntPow, x.root_, n)); }
WeightExpr WeightExpr::exp(const WeightExpr& x) { return WeightExpr(make_unary(Op::Exp, x.root_)); }
WeightExpr WeightExpr::log(const WeightExpr& x) { return WeightExpr(make_branch(Op::Log, x.root_, 0.0)); }
WeightExpr WeightExpr::pow(const WeightExpr& base, cd s) {
  return WeightExpr(make_branch(Op::Pow, base.root_, s));
}

cd WeightExpr::evaluate(cd z) const { return eval(*root_, z); }

TaylorSeries WeightExpr::to_series(std::size_t order) const { return series(*root_, order); }

WeightExpr WeightExpr::substitute(const MobiusCoeffs& m0) const {
  const MobiusCoeffs m = m0.normalized();
  const NodePtr z = make_var();
  const NodePtr num = make_binary(Op::Add, make_binary(Op::Mul, make_const(m.alpha), z), make_const(m.beta));
  const NodePtr den = make_binary(Op::Add, make_binary(Op::Mul, make_const(m.gamma), z), make_const(m.delta));
  return WeightExpr(wcospec::substitute(root_, make_binary(Op::Div, num, den)));
}

std::string WeightExpr::to_string() const {
  std::string out;
  print(*root_, 0, out);
  return out;
}

std::optional<cd> WeightExpr::constant_value() const {
  if (root_->op == Op::Const) return root_->value;
  return std::nullopt;
}

bool WeightExpr::has_boundary_atom_at(cd c, double tol) const { return boundary_at(*root_, c, tol); }

bool WeightExpr::operator==(const WeightExpr& other) const { return equal(*root_, *other.root_); }

WeightExpr parse_expr(std::string_view text) { return ExprBuilder::wrap(Parser(text).parse_all()); }

cd parse_constant(std::string_view text) {
  const WeightExpr e = parse_expr(text);
  if (auto v = e.constant_value()) return *v;
  throw Error(ErrorKind::SyntaxError, "expected a constant, got an expression in z: " + std::string(text), 0);
}

}  // namespace wcospec
