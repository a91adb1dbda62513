#include "fractim/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace fractim {

namespace {

enum class Op { Const, VarX, VarY, Neg, Sin, Cos, Exp, Log, Add, Sub, Mul, Div, Pow };

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kHalfPi = 1.5707963267948966192313216916398;
constexpr double kPi = 3.1415926535897932384626433832795;

double pad2_dn(double v) {
  v = std::nextafter(v, -kInf);
  return std::nextafter(v, -kInf);
}

double pad2_up(double v) {
  v = std::nextafter(v, kInf);
  return std::nextafter(v, kInf);
}

}  // namespace

struct Expr::Node {
  Op op;
  double value = 0.0;  // Const payload, or Pow exponent
  NodeP a, b;
};

namespace {

using Node = Expr::Node;
using NodeP = Expr::NodeP;

NodeP raw(Op op, double value, NodeP a = nullptr, NodeP b = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->value = value;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

bool is_const(const NodeP& n, double* out = nullptr) {
  if (n->op != Op::Const) return false;
  if (out != nullptr) *out = n->value;
  return true;
}

bool is_const_value(const NodeP& n, double v) { return n->op == Op::Const && n->value == v; }

bool is_integral(double e) { return std::nearbyint(e) == e && std::fabs(e) <= 1e9; }

// True when the subtree is defined for every real input, so annihilating
// simplifications (0 * u -> 0, u^0 -> 1) cannot erase a domain restriction.
bool domain_total(const NodeP& n) {
  switch (n->op) {
    case Op::Const:
    case Op::VarX:
    case Op::VarY:
      return true;
    case Op::Neg:
    case Op::Sin:
    case Op::Cos:
    case Op::Exp:
      return domain_total(n->a);
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
      return domain_total(n->a) && domain_total(n->b);
    case Op::Pow:
      return is_integral(n->value) && n->value >= 0.0 && domain_total(n->a);
    case Op::Log:
    case Op::Div:
      return false;
  }
  return false;
}

// --- simplifying constructors (used by the differentiator) ------------------

NodeP s_cnst(double v) { return raw(Op::Const, v); }

NodeP s_neg(NodeP u) {
  double v;
  if (is_const(u, &v)) return s_cnst(-v);
  if (u->op == Op::Neg) return u->a;
  return raw(Op::Neg, 0.0, std::move(u));
}

NodeP s_add(NodeP a, NodeP b) {
  double va, vb;
  if (is_const(a, &va) && is_const(b, &vb)) return s_cnst(va + vb);
  if (is_const_value(a, 0.0)) return b;
  if (is_const_value(b, 0.0)) return a;
  return raw(Op::Add, 0.0, std::move(a), std::move(b));
}

NodeP s_sub(NodeP a, NodeP b) {
  double va, vb;
  if (is_const(a, &va) && is_const(b, &vb)) return s_cnst(va - vb);
  if (is_const_value(b, 0.0)) return a;
  if (is_const_value(a, 0.0)) return s_neg(std::move(b));
  return raw(Op::Sub, 0.0, std::move(a), std::move(b));
}

NodeP s_mul(NodeP a, NodeP b) {
  double va, vb;
  if (is_const(a, &va) && is_const(b, &vb)) return s_cnst(va * vb);
  if (is_const_value(a, 0.0) && domain_total(b)) return s_cnst(0.0);
  if (is_const_value(b, 0.0) && domain_total(a)) return s_cnst(0.0);
  if (is_const_value(a, 1.0)) return b;
  if (is_const_value(b, 1.0)) return a;
  if (is_const_value(a, -1.0)) return s_neg(std::move(b));
  if (is_const_value(b, -1.0)) return s_neg(std::move(a));
  return raw(Op::Mul, 0.0, std::move(a), std::move(b));
}

NodeP s_div(NodeP a, NodeP b) {
  double va, vb;
  if (is_const(a, &va) && is_const(b, &vb) && vb != 0.0) return s_cnst(va / vb);
  if (is_const_value(b, 1.0)) return a;
  if (is_const_value(b, -1.0)) return s_neg(std::move(a));
  return raw(Op::Div, 0.0, std::move(a), std::move(b));
}

NodeP s_pow(NodeP u, double e) {
  if (e == 1.0) return u;
  if (e == 0.0 && domain_total(u)) return s_cnst(1.0);
  double v;
  if (is_const(u, &v)) {
    if (v > 0.0 || (v == 0.0 && e > 0.0) || (v < 0.0 && is_integral(e))) return s_cnst(std::pow(v, e));
  }
  return raw(Op::Pow, e, std::move(u));
}

NodeP s_sin(NodeP u) {
  double v;
  if (is_const(u, &v)) return s_cnst(std::sin(v));
  return raw(Op::Sin, 0.0, std::move(u));
}

NodeP s_cos(NodeP u) {
  double v;
  if (is_const(u, &v)) return s_cnst(std::cos(v));
  return raw(Op::Cos, 0.0, std::move(u));
}

NodeP s_exp(NodeP u) {
  double v;
  if (is_const(u, &v)) return s_cnst(std::exp(v));
  return raw(Op::Exp, 0.0, std::move(u));
}

// --- parser ------------------------------------------------------------------

struct Token {
  enum Kind { Num, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End } kind;
  double num = 0.0;
  std::string ident;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
    tok_.pos = i_;
    if (i_ >= src_.size()) {
      tok_.kind = Token::End;
      return;
    }
    char c = src_[i_];
    switch (c) {
      case '+': tok_.kind = Token::Plus; ++i_; return;
      case '-': tok_.kind = Token::Minus; ++i_; return;
      case '*': tok_.kind = Token::Star; ++i_; return;
      case '/': tok_.kind = Token::Slash; ++i_; return;
      case '^': tok_.kind = Token::Caret; ++i_; return;
      case '(': tok_.kind = Token::LParen; ++i_; return;
      case ')': tok_.kind = Token::RParen; ++i_; return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = i_;
      while (i_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[i_])) || src_[i_] == '.'))
        ++i_;
      if (i_ < src_.size() && (src_[i_] == 'e' || src_[i_] == 'E')) {
        std::size_t save = i_;
        ++i_;
        if (i_ < src_.size() && (src_[i_] == '+' || src_[i_] == '-')) ++i_;
        if (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) {
          while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) ++i_;
        } else {
          i_ = save;  // 'e' belongs to an identifier or is stray
        }
      }
      std::string text(src_.substr(start, i_ - start));
      char* end = nullptr;
      double v = std::strtod(text.c_str(), &end);
      if (end == nullptr || *end != '\0' || !std::isfinite(v))
        throw ParseError("malformed number '" + text + "'", start);
      tok_.kind = Token::Num;
      tok_.num = v;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = i_;
      while (i_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[i_]))) ++i_;
      tok_.kind = Token::Ident;
      tok_.ident = std::string(src_.substr(start, i_ - start));
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", i_);
  }

  std::string_view src_;
  std::size_t i_ = 0;
  Token tok_;
};

bool has_variable(const NodeP& n) {
  if (n->op == Op::VarX || n->op == Op::VarY) return true;
  if (n->a && has_variable(n->a)) return true;
  if (n->b && has_variable(n->b)) return true;
  return false;
}

double eval_point(const NodeP& n, double x, double y);

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) {}

  NodeP run() {
    NodeP e = expr();
    if (lex_.peek().kind != Token::End)
      throw ParseError("unexpected trailing input", lex_.peek().pos);
    return e;
  }

 private:
  NodeP expr() {
    NodeP lhs = term();
    while (true) {
      Token::Kind k = lex_.peek().kind;
      if (k == Token::Plus) {
        lex_.take();
        lhs = raw(Op::Add, 0.0, lhs, term());
      } else if (k == Token::Minus) {
        lex_.take();
        lhs = raw(Op::Sub, 0.0, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodeP term() {
    NodeP lhs = unary();
    while (true) {
      Token::Kind k = lex_.peek().kind;
      if (k == Token::Star) {
        lex_.take();
        lhs = raw(Op::Mul, 0.0, lhs, unary());
      } else if (k == Token::Slash) {
        lex_.take();
        lhs = raw(Op::Div, 0.0, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodeP unary() {
    if (lex_.peek().kind == Token::Minus) {
      lex_.take();
      NodeP child = unary();
      if (child->op == Op::Const) return raw(Op::Const, -child->value);
      return raw(Op::Neg, 0.0, child);
    }
    return power();
  }

  NodeP power() {
    NodeP base = atom();
    if (lex_.peek().kind == Token::Caret) {
      std::size_t caret_pos = lex_.take().pos;
      NodeP expo = unary();  // right-associative; also allows x^-2
      if (has_variable(expo))
        throw ParseError("exponent must be a constant", caret_pos);
      double e = eval_point(expo, 0.0, 0.0);
      return raw(Op::Pow, e, base);
    }
    return base;
  }

  NodeP atom() {
    Token t = lex_.take();
    switch (t.kind) {
      case Token::Num:
        return raw(Op::Const, t.num);
      case Token::LParen: {
        NodeP inner = expr();
        expect(Token::RParen, "expected ')'");
        return inner;
      }
      case Token::Ident: {
        if (t.ident == "x") return raw(Op::VarX, 0.0);
        if (t.ident == "y") return raw(Op::VarY, 0.0);
        Op op;
        if (t.ident == "sin") op = Op::Sin;
        else if (t.ident == "cos") op = Op::Cos;
        else if (t.ident == "exp") op = Op::Exp;
        else if (t.ident == "log") op = Op::Log;
        else throw ParseError("unknown identifier '" + t.ident + "'", t.pos);
        expect(Token::LParen, "expected '(' after function name");
        NodeP arg = expr();
        expect(Token::RParen, "expected ')'");
        return raw(op, 0.0, arg);
      }
      default:
        throw ParseError("expected a value", t.pos);
    }
  }

  void expect(Token::Kind k, const char* message) {
    Token t = lex_.take();
    if (t.kind != k) throw ParseError(message, t.pos);
  }

  Lexer lex_;
};

// --- evaluation ---------------------------------------------------------------

double eval_point(const NodeP& n, double x, double y) {
  double r;
  switch (n->op) {
    case Op::Const: return n->value;
    case Op::VarX: return x;
    case Op::VarY: return y;
    case Op::Neg: return -eval_point(n->a, x, y);
    case Op::Sin: return std::sin(eval_point(n->a, x, y));
    case Op::Cos: return std::cos(eval_point(n->a, x, y));
    case Op::Exp:
      r = std::exp(eval_point(n->a, x, y));
      if (!std::isfinite(r)) throw DomainError("exp overflow");
      return r;
    case Op::Log: {
      double v = eval_point(n->a, x, y);
      if (v <= 0.0) throw DomainError("log of a non-positive value");
      return std::log(v);
    }
    case Op::Add: return eval_point(n->a, x, y) + eval_point(n->b, x, y);
    case Op::Sub: return eval_point(n->a, x, y) - eval_point(n->b, x, y);
    case Op::Mul: return eval_point(n->a, x, y) * eval_point(n->b, x, y);
    case Op::Div: {
      double num = eval_point(n->a, x, y);
      double den = eval_point(n->b, x, y);
      if (den == 0.0) throw DomainError("division by zero");
      return num / den;
    }
    case Op::Pow: {
      double base = eval_point(n->a, x, y);
      double e = n->value;
      if (!is_integral(e) && base < 0.0)
        throw DomainError("fractional power of a negative base");
      if (base == 0.0 && e < 0.0) throw DomainError("zero raised to a negative power");
      // Same fast paths as the compiled tape, so both routes agree bitwise.
      if (e == 2.0) return base * base;
      if (e == 3.0) return base * base * base;
      r = std::pow(base, e);
      if (!std::isfinite(r)) throw DomainError("pow overflow");
      return r;
    }
  }
  throw Error("corrupt expression node");
}

// Endpoint transcendentals padded by 2 ulps for libm error, except at the
// arguments where the result is exact (sin 0 = 0, cos 0 = 1, exp 0 = 1,
// log 1 = 0): padding those would put spurious sign wiggle on quantities
// that are exactly zero on a box edge.
double sin_dn(double x) { return x == 0.0 ? 0.0 : pad2_dn(std::sin(x)); }
double sin_up(double x) { return x == 0.0 ? 0.0 : pad2_up(std::sin(x)); }
double cos_dn(double x) { return x == 0.0 ? 1.0 : pad2_dn(std::cos(x)); }
double cos_up(double x) { return x == 0.0 ? 1.0 : pad2_up(std::cos(x)); }

Interval ia_sin(const Interval& a) {
  if (a.width() >= kTwoPi || std::fabs(a.lo) > 1e15 || std::fabs(a.hi) > 1e15)
    return Interval(-1.0, 1.0);
  double lo = std::min(sin_dn(a.lo), sin_dn(a.hi));
  double hi = std::max(sin_up(a.lo), sin_up(a.hi));
  double slack = 1e-9 + 1e-12 * std::max(std::fabs(a.lo), std::fabs(a.hi));
  double k = std::floor((a.hi - kHalfPi) / kTwoPi + 1e-12);
  if (kHalfPi + kTwoPi * k >= a.lo - slack && kHalfPi + kTwoPi * k <= a.hi + slack) hi = 1.0;
  k = std::floor((a.hi + kHalfPi) / kTwoPi + 1e-12);
  if (-kHalfPi + kTwoPi * k >= a.lo - slack && -kHalfPi + kTwoPi * k <= a.hi + slack) lo = -1.0;
  return Interval(std::max(lo, -1.0), std::min(hi, 1.0));
}

Interval ia_cos(const Interval& a) {
  if (a.width() >= kTwoPi || std::fabs(a.lo) > 1e15 || std::fabs(a.hi) > 1e15)
    return Interval(-1.0, 1.0);
  double lo = std::min(cos_dn(a.lo), cos_dn(a.hi));
  double hi = std::max(cos_up(a.lo), cos_up(a.hi));
  double slack = 1e-9 + 1e-12 * std::max(std::fabs(a.lo), std::fabs(a.hi));
  double k = std::floor(a.hi / kTwoPi + 1e-12);
  if (kTwoPi * k >= a.lo - slack && kTwoPi * k <= a.hi + slack) hi = 1.0;
  k = std::floor((a.hi - kPi) / kTwoPi + 1e-12);
  if (kPi + kTwoPi * k >= a.lo - slack && kPi + kTwoPi * k <= a.hi + slack) lo = -1.0;
  return Interval(std::max(lo, -1.0), std::min(hi, 1.0));
}

Interval ia_exp(const Interval& a) {
  double lo = a.lo == 0.0 ? 1.0 : std::max(0.0, pad2_dn(std::exp(a.lo)));
  double hi = a.hi == 0.0 ? 1.0 : pad2_up(std::exp(a.hi));
  if (!std::isfinite(hi)) throw DomainError("exp overflow in enclosure");
  return Interval(lo, hi);
}

Interval ia_log(const Interval& a) {
  if (a.lo <= 0.0) throw DomainError("log of an interval reaching a non-positive value");
  double lo = a.lo == 1.0 ? 0.0 : pad2_dn(std::log(a.lo));
  double hi = a.hi == 1.0 ? 0.0 : pad2_up(std::log(a.hi));
  return Interval(lo, hi);
}

double ipow_dn(double v, double e) {
  if (v == 0.0) return 0.0;
  if (v == 1.0) return 1.0;
  double r = std::pow(v, e);
  if (!std::isfinite(r)) throw DomainError("pow overflow in enclosure");
  return pad2_dn(r);
}

double ipow_up(double v, double e) {
  if (v == 0.0) return 0.0;
  if (v == 1.0) return 1.0;
  double r = std::pow(v, e);
  if (!std::isfinite(r)) throw DomainError("pow overflow in enclosure");
  return pad2_up(r);
}

Interval ia_pow(const Interval& a, double e) {
  if (is_integral(e)) {
    long long n = static_cast<long long>(e);
    if (n == 0) return Interval(1.0, 1.0);
    if (n < 0) {
      Interval p = ia_pow(a, static_cast<double>(-n));
      return enclose::div(Interval(1.0, 1.0), p);
    }
    if (n % 2 != 0) return Interval(ipow_dn(a.lo, e), ipow_up(a.hi, e));
    if (a.lo >= 0.0) return Interval(std::max(0.0, ipow_dn(a.lo, e)), ipow_up(a.hi, e));
    if (a.hi <= 0.0) return Interval(std::max(0.0, ipow_dn(a.hi, e)), ipow_up(a.lo, e));
    return Interval(0.0, std::max(ipow_up(a.lo, e), ipow_up(a.hi, e)));
  }
  if (a.lo < 0.0) throw DomainError("fractional power of an interval reaching negatives");
  if (e > 0.0) return Interval(std::max(0.0, ipow_dn(a.lo, e)), ipow_up(a.hi, e));
  if (a.lo == 0.0) throw DomainError("negative power of an interval reaching zero");
  return Interval(ipow_dn(a.hi, e), ipow_up(a.lo, e));
}

Interval eval_box(const NodeP& n, const Interval& x, const Interval& y) {
  switch (n->op) {
    case Op::Const: return Interval(n->value, n->value);
    case Op::VarX: return x;
    case Op::VarY: return y;
    case Op::Neg: return enclose::neg(eval_box(n->a, x, y));
    case Op::Sin: return ia_sin(eval_box(n->a, x, y));
    case Op::Cos: return ia_cos(eval_box(n->a, x, y));
    case Op::Exp: return ia_exp(eval_box(n->a, x, y));
    case Op::Log: return ia_log(eval_box(n->a, x, y));
    case Op::Add: return enclose::add(eval_box(n->a, x, y), eval_box(n->b, x, y));
    case Op::Sub: return enclose::sub(eval_box(n->a, x, y), eval_box(n->b, x, y));
    case Op::Mul: return enclose::mul(eval_box(n->a, x, y), eval_box(n->b, x, y));
    case Op::Div: return enclose::div(eval_box(n->a, x, y), eval_box(n->b, x, y));
    case Op::Pow: return ia_pow(eval_box(n->a, x, y), n->value);
  }
  throw Error("corrupt expression node");
}

// --- printing -----------------------------------------------------------------

int precedence(const NodeP& n) {
  switch (n->op) {
    case Op::Add:
    case Op::Sub:
      return 1;
    case Op::Mul:
    case Op::Div:
      return 2;
    case Op::Neg:
      return 3;
    case Op::Pow:
      return 4;
    case Op::Const:
      return n->value < 0.0 ? 3 : 5;  // negative literal prints like a negation
    default:
      return 5;
  }
}

std::string number_str(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void print_node(const NodeP& n, int min_prec, std::string& out) {
  bool parens = precedence(n) < min_prec;
  if (parens) out += '(';
  switch (n->op) {
    case Op::Const: out += number_str(n->value); break;
    case Op::VarX: out += 'x'; break;
    case Op::VarY: out += 'y'; break;
    case Op::Neg:
      out += '-';
      print_node(n->a, 3, out);
      break;
    case Op::Sin:
    case Op::Cos:
    case Op::Exp:
    case Op::Log:
      out += (n->op == Op::Sin ? "sin" : n->op == Op::Cos ? "cos" : n->op == Op::Exp ? "exp" : "log");
      out += '(';
      print_node(n->a, 0, out);
      out += ')';
      break;
    case Op::Add:
      print_node(n->a, 1, out);
      out += " + ";
      print_node(n->b, 2, out);
      break;
    case Op::Sub:
      print_node(n->a, 1, out);
      out += " - ";
      print_node(n->b, 2, out);
      break;
    case Op::Mul:
      print_node(n->a, 2, out);
      out += '*';
      print_node(n->b, 3, out);
      break;
    case Op::Div:
      print_node(n->a, 2, out);
      out += '/';
      print_node(n->b, 3, out);
      break;
    case Op::Pow:
      print_node(n->a, 5, out);
      out += '^';
      out += number_str(n->value);
      break;
  }
  if (parens) out += ')';
}

bool nodes_identical(const NodeP& a, const NodeP& b) {
  if (a->op != b->op) return false;
  if (a->op == Op::Const || a->op == Op::Pow) {
    if (!(a->value == b->value)) return false;
  }
  if ((a->a == nullptr) != (b->a == nullptr)) return false;
  if ((a->b == nullptr) != (b->b == nullptr)) return false;
  if (a->a && !nodes_identical(a->a, b->a)) return false;
  if (a->b && !nodes_identical(a->b, b->b)) return false;
  return true;
}

NodeP diff_node(const NodeP& n, Var v) {
  switch (n->op) {
    case Op::Const: return s_cnst(0.0);
    case Op::VarX: return s_cnst(v == Var::X ? 1.0 : 0.0);
    case Op::VarY: return s_cnst(v == Var::Y ? 1.0 : 0.0);
    case Op::Neg: return s_neg(diff_node(n->a, v));
    case Op::Sin: return s_mul(s_cos(n->a), diff_node(n->a, v));
    case Op::Cos: return s_neg(s_mul(s_sin(n->a), diff_node(n->a, v)));
    case Op::Exp: return s_mul(s_exp(n->a), diff_node(n->a, v));
    case Op::Log: return s_div(diff_node(n->a, v), n->a);
    case Op::Add: return s_add(diff_node(n->a, v), diff_node(n->b, v));
    case Op::Sub: return s_sub(diff_node(n->a, v), diff_node(n->b, v));
    case Op::Mul:
      return s_add(s_mul(diff_node(n->a, v), n->b), s_mul(n->a, diff_node(n->b, v)));
    case Op::Div:
      return s_div(s_sub(s_mul(diff_node(n->a, v), n->b), s_mul(n->a, diff_node(n->b, v))),
                   s_pow(n->b, 2.0));
    case Op::Pow:
      return s_mul(s_mul(s_cnst(n->value), s_pow(n->a, n->value - 1.0)), diff_node(n->a, v));
  }
  throw Error("corrupt expression node");
}

}  // namespace

Expr Expr::parse(std::string_view source) { return Expr(Parser(source).run()); }

Expr Expr::constant(double v) { return Expr(raw(Op::Const, v)); }

Expr Expr::variable(Var v) { return Expr(raw(v == Var::X ? Op::VarX : Op::VarY, 0.0)); }

double Expr::eval(double x, double y) const { return eval_point(root_, x, y); }

Interval Expr::eval(const Interval& x, const Interval& y) const { return eval_box(root_, x, y); }

std::string Expr::str() const {
  std::string out;
  print_node(root_, 0, out);
  return out;
}

bool Expr::identical(const Expr& other) const { return nodes_identical(root_, other.root_); }

std::optional<double> Expr::constant_value() const {
  if (root_->op == Op::Const) return root_->value;
  return std::nullopt;
}

Expr e_add(const Expr& a, const Expr& b) { return Expr(raw(Op::Add, 0.0, a.root(), b.root())); }
Expr e_sub(const Expr& a, const Expr& b) { return Expr(raw(Op::Sub, 0.0, a.root(), b.root())); }
Expr e_mul(const Expr& a, const Expr& b) { return Expr(raw(Op::Mul, 0.0, a.root(), b.root())); }
Expr e_div(const Expr& a, const Expr& b) { return Expr(raw(Op::Div, 0.0, a.root(), b.root())); }
Expr e_neg(const Expr& a) { return Expr(raw(Op::Neg, 0.0, a.root())); }
Expr e_sin(const Expr& a) { return Expr(raw(Op::Sin, 0.0, a.root())); }
Expr e_cos(const Expr& a) { return Expr(raw(Op::Cos, 0.0, a.root())); }
Expr e_exp(const Expr& a) { return Expr(raw(Op::Exp, 0.0, a.root())); }
Expr e_log(const Expr& a) { return Expr(raw(Op::Log, 0.0, a.root())); }
Expr e_pow(const Expr& a, double exponent) { return Expr(raw(Op::Pow, exponent, a.root())); }

Expr derivative(const Expr& e, Var v) { return Expr(diff_node(e.root(), v)); }

PartialBundle PartialBundle::of(const Expr& f) {
  Expr fx = derivative(f, Var::X);
  Expr fy = derivative(f, Var::Y);
  Expr fxx = derivative(fx, Var::X);
  Expr fxy = derivative(fx, Var::Y);
  Expr fyy = derivative(fy, Var::Y);
  return PartialBundle{f, fx, fy, fxx, fxy, fyy};
}

namespace {

enum TapeOp : int {
  kConst, kX, kY, kNeg, kSin, kCos, kExp, kLog, kAdd, kSub, kMul, kDiv, kPow2, kPow3, kPow
};

void compile_node(const NodeP& n, std::vector<std::pair<int, double>>& out, int& depth, int& max_depth) {
  switch (n->op) {
    case Op::Const: out.push_back({kConst, n->value}); ++depth; break;
    case Op::VarX: out.push_back({kX, 0.0}); ++depth; break;
    case Op::VarY: out.push_back({kY, 0.0}); ++depth; break;
    case Op::Neg: compile_node(n->a, out, depth, max_depth); out.push_back({kNeg, 0.0}); break;
    case Op::Sin: compile_node(n->a, out, depth, max_depth); out.push_back({kSin, 0.0}); break;
    case Op::Cos: compile_node(n->a, out, depth, max_depth); out.push_back({kCos, 0.0}); break;
    case Op::Exp: compile_node(n->a, out, depth, max_depth); out.push_back({kExp, 0.0}); break;
    case Op::Log: compile_node(n->a, out, depth, max_depth); out.push_back({kLog, 0.0}); break;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
      compile_node(n->a, out, depth, max_depth);
      compile_node(n->b, out, depth, max_depth);
      out.push_back({n->op == Op::Add ? kAdd : n->op == Op::Sub ? kSub : n->op == Op::Mul ? kMul : kDiv, 0.0});
      --depth;
      break;
    case Op::Pow:
      compile_node(n->a, out, depth, max_depth);
      if (n->value == 2.0) out.push_back({kPow2, 0.0});
      else if (n->value == 3.0) out.push_back({kPow3, 0.0});
      else out.push_back({kPow, n->value});
      break;
  }
  max_depth = std::max(max_depth, depth);
}

constexpr int kMaxTapeStack = 64;

}  // namespace

CompiledExpr::CompiledExpr(const Expr& e) {
  std::vector<std::pair<int, double>> ops;
  int depth = 0, max_depth = 0;
  compile_node(e.root(), ops, depth, max_depth);
  if (max_depth > kMaxTapeStack) throw InvariantError("expression too deep to compile");
  code_.reserve(ops.size());
  for (auto& [op, value] : ops) code_.push_back(Instr{op, value});
}

double CompiledExpr::eval(double x, double y) const {
  double st[kMaxTapeStack];
  int sp = 0;
  for (const Instr& ins : code_) {
    switch (ins.op) {
      case kConst: st[sp++] = ins.value; break;
      case kX: st[sp++] = x; break;
      case kY: st[sp++] = y; break;
      case kNeg: st[sp - 1] = -st[sp - 1]; break;
      case kSin: st[sp - 1] = std::sin(st[sp - 1]); break;
      case kCos: st[sp - 1] = std::cos(st[sp - 1]); break;
      case kExp: st[sp - 1] = std::exp(st[sp - 1]); break;
      case kLog: st[sp - 1] = std::log(st[sp - 1]); break;
      case kAdd: st[sp - 2] += st[sp - 1]; --sp; break;
      case kSub: st[sp - 2] -= st[sp - 1]; --sp; break;
      case kMul: st[sp - 2] *= st[sp - 1]; --sp; break;
      case kDiv: st[sp - 2] /= st[sp - 1]; --sp; break;
      case kPow2: st[sp - 1] *= st[sp - 1]; break;
      case kPow3: st[sp - 1] = st[sp - 1] * st[sp - 1] * st[sp - 1]; break;
      case kPow: st[sp - 1] = std::pow(st[sp - 1], ins.value); break;
    }
  }
  return st[0];
}

}  // namespace fractim
