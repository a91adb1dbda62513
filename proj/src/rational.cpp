#include "fractim/rational.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>

namespace fractim {

namespace {

using i128 = __int128;

constexpr std::int64_t kMaxMag = std::numeric_limits<std::int64_t>::max();

i128 i128_abs(i128 v) { return v < 0 ? -v : v; }

i128 i128_gcd(i128 a, i128 b) {
  a = i128_abs(a);
  b = i128_abs(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::optional<Rat> reduce(i128 num, i128 den) {
  if (den == 0) return std::nullopt;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (num == 0) return Rat{0, 1};
  i128 g = i128_gcd(num, den);
  num /= g;
  den /= g;
  if (i128_abs(num) > kMaxMag || den > kMaxMag) return std::nullopt;
  return Rat{static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
}

}  // namespace

std::optional<Rat> Rat::make(std::int64_t num, std::int64_t den) {
  return reduce(static_cast<i128>(num), static_cast<i128>(den));
}

std::optional<Rat> Rat::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    std::string lhs(text.substr(0, slash));
    std::string rhs(text.substr(slash + 1));
    if (lhs.empty() || rhs.empty()) return std::nullopt;
    char* end = nullptr;
    long long n = std::strtoll(lhs.c_str(), &end, 10);
    if (end == nullptr || *end != '\0') return std::nullopt;
    long long d = std::strtoll(rhs.c_str(), &end, 10);
    if (end == nullptr || *end != '\0' || d == 0) return std::nullopt;
    return make(n, d);
  }
  // Integer or decimal literal; only exact conversions are accepted.
  char* end = nullptr;
  std::string owned(text);
  double value = std::strtod(owned.c_str(), &end);
  if (end == nullptr || *end != '\0' || !std::isfinite(value)) return std::nullopt;
  Scalar s = Scalar::of(value);
  return s.exact;
}

double Rat::to_double() const {
  // Both operands convert exactly for the magnitudes we keep, so the single
  // division rounding makes this the nearest double.
  return static_cast<double>(num) / static_cast<double>(den);
}

double Rat::to_double_up() const {
  double d = to_double();
  while (rat_cmp(d, *this) < 0) d = std::nextafter(d, std::numeric_limits<double>::infinity());
  return d;
}

double Rat::to_double_down() const {
  double d = to_double();
  while (rat_cmp(d, *this) > 0) d = std::nextafter(d, -std::numeric_limits<double>::infinity());
  return d;
}

std::optional<Rat> rat_add(const Rat& a, const Rat& b) {
  return reduce(static_cast<i128>(a.num) * b.den + static_cast<i128>(b.num) * a.den,
                static_cast<i128>(a.den) * b.den);
}

std::optional<Rat> rat_sub(const Rat& a, const Rat& b) { return rat_add(a, rat_neg(b)); }

std::optional<Rat> rat_mul(const Rat& a, const Rat& b) {
  return reduce(static_cast<i128>(a.num) * b.num, static_cast<i128>(a.den) * b.den);
}

std::optional<Rat> rat_div(const Rat& a, const Rat& b) {
  if (b.num == 0) return std::nullopt;
  return reduce(static_cast<i128>(a.num) * b.den, static_cast<i128>(a.den) * b.num);
}

Rat rat_neg(const Rat& a) { return Rat{-a.num, a.den}; }

Rat rat_abs(const Rat& a) { return Rat{a.num < 0 ? -a.num : a.num, a.den}; }

int rat_cmp(const Rat& a, const Rat& b) {
  i128 lhs = static_cast<i128>(a.num) * b.den;
  i128 rhs = static_cast<i128>(b.num) * a.den;
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

int rat_cmp(double x, const Rat& q) {
  if (std::isnan(x)) return 1;
  if (std::isinf(x)) return x > 0 ? 1 : -1;
  if (x == 0.0) return q.num == 0 ? 0 : (q.num > 0 ? -1 : 1);
  int exp = 0;
  double m = std::frexp(x, &exp);                            // x = m * 2^exp
  auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));  // exact 53-bit integer
  int e = exp - 53;                                          // x = mant * 2^e
  // sign of x - q  ==  sign of mant*2^e*den - num. Shift whichever side has
  // the positive power of two; once a side provably dominates, its sign
  // decides (the other side stays below 2^116 in magnitude).
  const i128 kDominant = static_cast<i128>(1) << 120;
  i128 lhs = static_cast<i128>(mant) * q.den;
  i128 rhs = q.num;
  if (e > 0) {
    for (int i = 0; i < e; ++i) {
      lhs *= 2;
      if (i128_abs(lhs) > kDominant) return lhs > 0 ? 1 : -1;
    }
  } else {
    for (int i = 0; i < -e; ++i) {
      rhs *= 2;
      if (i128_abs(rhs) > kDominant) return rhs > 0 ? -1 : 1;
    }
  }
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

bool operator==(const Rat& a, const Rat& b) { return a.num == b.num && a.den == b.den; }

std::string to_string(const Rat& a) {
  if (a.den == 1) return std::to_string(a.num);
  return std::to_string(a.num) + "/" + std::to_string(a.den);
}

Scalar Scalar::of(double value) {
  Scalar s;
  s.v = value;
  // Every finite double is a dyadic rational; keep the exact value whenever
  // it fits in 64/64 bits (covers every humanly-written magnitude).
  if (std::isfinite(value) && value != 0.0) {
    int exp = 0;
    double m = std::frexp(value, &exp);
    auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
    int e = exp - 53;  // value = mant * 2^e
    if (e >= 0 && e <= 9) {
      s.exact = Rat::make(mant * (static_cast<std::int64_t>(1) << e), 1);
    } else if (e < 0 && -e <= 62) {
      s.exact = Rat::make(mant, static_cast<std::int64_t>(1) << -e);
    }
  } else if (value == 0.0) {
    s.exact = Rat{0, 1};
  }
  return s;
}

Scalar Scalar::rational(std::int64_t num, std::int64_t den) {
  Scalar s;
  auto r = Rat::make(num, den);
  if (r) {
    s.exact = r;
    s.v = r->to_double();
  } else {
    s.v = static_cast<double>(num) / static_cast<double>(den);
  }
  return s;
}

std::optional<Scalar> Scalar::parse(std::string_view text) {
  if (auto r = Rat::parse(text)) {
    Scalar s;
    s.exact = r;
    s.v = r->to_double();
    return s;
  }
  char* end = nullptr;
  std::string owned(text);
  double value = std::strtod(owned.c_str(), &end);
  if (end == nullptr || *end != '\0' || !std::isfinite(value)) return std::nullopt;
  return of(value);
}

double Scalar::upper() const { return exact ? exact->to_double_up() : v; }

double Scalar::lower() const { return exact ? exact->to_double_down() : v; }

namespace {

template <typename F>
Scalar combine(const Scalar& a, const Scalar& b, double dv, F&& rat_op) {
  Scalar s;
  s.v = dv;
  if (a.exact && b.exact) s.exact = rat_op(*a.exact, *b.exact);
  return s;
}

}  // namespace

Scalar operator+(const Scalar& a, const Scalar& b) {
  return combine(a, b, a.v + b.v, [](const Rat& x, const Rat& y) { return rat_add(x, y); });
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  return combine(a, b, a.v - b.v, [](const Rat& x, const Rat& y) { return rat_sub(x, y); });
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  return combine(a, b, a.v * b.v, [](const Rat& x, const Rat& y) { return rat_mul(x, y); });
}

Scalar operator/(const Scalar& a, const Scalar& b) {
  return combine(a, b, a.v / b.v, [](const Rat& x, const Rat& y) { return rat_div(x, y); });
}

Scalar scalar_neg(const Scalar& a) {
  Scalar s;
  s.v = -a.v;
  if (a.exact) s.exact = rat_neg(*a.exact);
  return s;
}

Scalar scalar_abs(const Scalar& a) {
  Scalar s;
  s.v = std::fabs(a.v);
  if (a.exact) s.exact = rat_abs(*a.exact);
  return s;
}

Scalar scalar_pow(const Scalar& a, int n) {
  Scalar out = Scalar::rational(1, 1);
  for (int i = 0; i < n; ++i) out = out * a;
  return out;
}

int scalar_cmp(const Scalar& a, const Scalar& b) {
  if (a.exact && b.exact) return rat_cmp(*a.exact, *b.exact);
  if (a.exact) return -rat_cmp(b.v, *a.exact);
  if (b.exact) return rat_cmp(a.v, *b.exact);
  return a.v < b.v ? -1 : (a.v > b.v ? 1 : 0);
}

bool scalar_eq(const Scalar& a, const Scalar& b) { return scalar_cmp(a, b) == 0; }

double pad_up(double v, int ulps) {
  for (int i = 0; i < ulps; ++i) v = std::nextafter(v, std::numeric_limits<double>::infinity());
  return v;
}

double pad_down(double v, int ulps) {
  for (int i = 0; i < ulps; ++i) v = std::nextafter(v, -std::numeric_limits<double>::infinity());
  return v;
}

}  // namespace fractim
