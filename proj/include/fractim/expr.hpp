#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fractim/interval.hpp"

namespace fractim {

enum class Var { X, Y };

// Immutable expression tree in two variables. Grammar: numeric literals,
// `x`, `y`, `+ - * /`, `^` with a constant exponent (right-associative,
// binds tighter than unary minus), calls sin/cos/exp/log, parentheses.
class Expr {
 public:
  struct Node;
  using NodeP = std::shared_ptr<const Node>;

  static Expr parse(std::string_view source);
  static Expr constant(double v);
  static Expr variable(Var v);

  // Point evaluation; domain violations throw DomainError rather than
  // producing NaN/inf.
  double eval(double x, double y) const;

  // Rigorous enclosure: contains eval(x, y) for every (x, y) in X x Y.
  Interval eval(const Interval& x, const Interval& y) const;

  std::string str() const;
  bool identical(const Expr& other) const;
  std::optional<double> constant_value() const;

  const NodeP& root() const { return root_; }
  explicit Expr(NodeP n) : root_(std::move(n)) {}

 private:
  NodeP root_;
};

// Raw builders (no simplification) for tests and generators.
Expr e_add(const Expr& a, const Expr& b);
Expr e_sub(const Expr& a, const Expr& b);
Expr e_mul(const Expr& a, const Expr& b);
Expr e_div(const Expr& a, const Expr& b);
Expr e_neg(const Expr& a);
Expr e_sin(const Expr& a);
Expr e_cos(const Expr& a);
Expr e_exp(const Expr& a);
Expr e_log(const Expr& a);
Expr e_pow(const Expr& a, double exponent);

// Exact symbolic derivative with constant folding and 0/1 absorption.
// Simplification never removes a subexpression whose domain is restricted.
Expr derivative(const Expr& e, Var v);

struct PartialBundle {
  Expr f, fx, fy, fxx, fxy, fyy;
  // fxy is d/dy(d/dx f); mixed-partial symmetry is a test obligation, not
  // re-derived here.
  static PartialBundle of(const Expr& f);
};

// Flattened postfix program for fast repeated point evaluation in hot loops.
// No domain checks: callers must verify finiteness of results if the
// expression can leave its domain.
class CompiledExpr {
 public:
  explicit CompiledExpr(const Expr& e);
  double eval(double x, double y) const;

 private:
  struct Instr {
    int op;
    double value;
  };
  std::vector<Instr> code_;
};

}  // namespace fractim
