#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace fractim {

// Exact rational on 64-bit numerator/denominator, always reduced, den > 0.
// Arithmetic returns nullopt on overflow; callers fall back to doubles.
struct Rat {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static std::optional<Rat> make(std::int64_t num, std::int64_t den);
  // Accepts "p/q", integers, and plain decimals ("0.25" -> 1/4 exactly).
  static std::optional<Rat> parse(std::string_view text);

  double to_double() const;       // nearest
  double to_double_up() const;    // smallest double >= exact value
  double to_double_down() const;  // largest double <= exact value

  bool is_zero() const { return num == 0; }
};

std::optional<Rat> rat_add(const Rat& a, const Rat& b);
std::optional<Rat> rat_sub(const Rat& a, const Rat& b);
std::optional<Rat> rat_mul(const Rat& a, const Rat& b);
std::optional<Rat> rat_div(const Rat& a, const Rat& b);
Rat rat_neg(const Rat& a);
Rat rat_abs(const Rat& a);

int rat_cmp(const Rat& a, const Rat& b);  // sign of a - b
// Exact comparison of a double against a rational (sign of x - q).
int rat_cmp(double x, const Rat& q);
bool operator==(const Rat& a, const Rat& b);
std::string to_string(const Rat& a);

// A numeric parameter: its double value plus, when the input denoted an
// exact fraction or small dyadic, the rational it stands for. Arithmetic
// keeps the exact part alive as long as it stays representable, so derived
// constants (ratio windows, gap sizes) can be compared without rounding.
struct Scalar {
  double v = 0.0;
  std::optional<Rat> exact;

  static Scalar of(double value);  // detects exact small dyadics (0.25, 2, ...)
  static Scalar rational(std::int64_t num, std::int64_t den);
  static std::optional<Scalar> parse(std::string_view text);

  bool has_exact() const { return exact.has_value(); }
  // Directed double values: guaranteed >= / <= the represented number.
  double upper() const;
  double lower() const;
};

Scalar operator+(const Scalar& a, const Scalar& b);
Scalar operator-(const Scalar& a, const Scalar& b);
Scalar operator*(const Scalar& a, const Scalar& b);
Scalar operator/(const Scalar& a, const Scalar& b);
Scalar scalar_neg(const Scalar& a);
Scalar scalar_abs(const Scalar& a);
Scalar scalar_pow(const Scalar& a, int n);  // n >= 0

// Exact when both carry rationals, double comparison otherwise.
int scalar_cmp(const Scalar& a, const Scalar& b);
bool scalar_eq(const Scalar& a, const Scalar& b);

// n outward nextafter steps; used to pad derived double-only constants.
double pad_up(double v, int ulps = 1);
double pad_down(double v, int ulps = 1);

}  // namespace fractim
