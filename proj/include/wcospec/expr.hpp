#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "wcospec/mobius.hpp"
#include "wcospec/series.hpp"

namespace wcospec {

struct ExprNode;

// Immutable expression tree in the variable z. Subtrees are shared, so
// copies and substitutions are cheap. Operations whose operands are all
// constants are folded when the node is built.
class WeightExpr {
 public:
  WeightExpr();  // the constant 0

  static WeightExpr constant(cd value);
  static WeightExpr variable();

  friend WeightExpr operator+(const WeightExpr& l, const WeightExpr& r);
  friend WeightExpr operator-(const WeightExpr& l, const WeightExpr& r);
  friend WeightExpr operator*(const WeightExpr& l, const WeightExpr& r);
  friend WeightExpr operator/(const WeightExpr& l, const WeightExpr& r);
  friend WeightExpr operator-(const WeightExpr& x);
  static WeightExpr ipow(const WeightExpr& x, long n);
  static WeightExpr exp(const WeightExpr& x);
  static WeightExpr log(const WeightExpr& x);
  // Branch: if base = c ± X with |c| = 1 the value is c^s exp(s Log(1 ± X/c));
  // otherwise base(0)^s exp(s Log(base/base(0))). BranchUndefined if base(0) = 0.
  static WeightExpr pow(const WeightExpr& base, cd s);

  cd evaluate(cd z) const;
  TaylorSeries to_series(std::size_t order) const;
  // The expression with z replaced by m(z).
  WeightExpr substitute(const MobiusCoeffs& m) const;
  std::string to_string() const;

  std::optional<cd> constant_value() const;
  // True if the tree contains a pow/log boundary atom anchored at c.
  bool has_boundary_atom_at(cd c, double tol = 1e-9) const;

  bool operator==(const WeightExpr& other) const;
  bool operator!=(const WeightExpr& other) const { return !(*this == other); }

 private:
  explicit WeightExpr(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {}
  std::shared_ptr<const ExprNode> root_;

  friend struct ExprBuilder;
};

// Throws SyntaxError (with position) or ArityError. Grammar: docs/grammar.md.
WeightExpr parse_expr(std::string_view text);
// Parses an expression that must not depend on z.
cd parse_constant(std::string_view text);

}  // namespace wcospec
