#pragma once

#include <random>
#include <vector>

#include "fractim/expr.hpp"

namespace testutil {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

// Random expression defined everywhere on [0,1]^2: divisions are guarded by
// positive denominators and logs by arguments bounded away from zero.
inline fractim::Expr random_expr(std::mt19937_64& rng, int depth) {
  using namespace fractim;
  if (depth <= 0) {
    switch (rng() % 3) {
      case 0: return Expr::variable(Var::X);
      case 1: return Expr::variable(Var::Y);
      default: return Expr::constant(std::round(uniform(rng, -2.0, 2.0) * 16.0) / 16.0);
    }
  }
  switch (rng() % 10) {
    case 0: return e_add(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 1: return e_sub(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 2: return e_mul(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 3:
      return e_div(random_expr(rng, depth - 1),
                   e_add(Expr::constant(1.5), e_pow(random_expr(rng, depth - 2 < 0 ? 0 : depth - 2), 2)));
    case 4: {
      // Parsed trees never hold a negation of a literal; fold to match.
      fractim::Expr child = random_expr(rng, depth - 1);
      if (auto v = child.constant_value()) return fractim::Expr::constant(-*v);
      return e_neg(child);
    }
    case 5: return e_sin(random_expr(rng, depth - 1));
    case 6: return e_cos(random_expr(rng, depth - 1));
    case 7: return e_pow(random_expr(rng, depth - 1), static_cast<double>(2 + rng() % 2));
    case 8:
      return e_log(e_add(Expr::constant(0.5),
                         e_pow(random_expr(rng, depth - 2 < 0 ? 0 : depth - 2), 2)));
    default: return e_exp(e_mul(Expr::constant(0.5), random_expr(rng, depth - 1)));
  }
}

// The expressions every demo exercises, with a box each is defined on.
struct DemoFn {
  const char* text;
  double x_lo, x_hi, y_lo, y_hi;
};

inline std::vector<DemoFn> demo_functions() {
  return {
      {"x + y", 0, 1, 0, 1},
      {"x - y", 0, 1, 0, 1},
      {"x + 0.5*y", 0, 1, 0, 1},
      {"x*y", 0, 1, 0, 1},
      {"x/y", 0.05, 1, 0.67, 1},
      {"x^2 + y^2 + 6*x + 3*y + 0.5*x*y", 0, 1, 0, 1},
      {"sin(-0.5*x*y) + 12*x + 6*y", 0, 1, 0, 1},
  };
}

}  // namespace testutil
