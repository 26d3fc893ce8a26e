#pragma once
// Exact arithmetic in Q(phi) and in the quadratic extension Q(phi)(s),
// where phi = (1+sqrt5)/2 is the golden ratio and s = sqrt(2+phi) > 0.
//
// GoldenNum  a + b*phi, rational a, b.  Products reduce via phi^2 = phi + 1.
// QuadExt    u + v*s,   u, v in Q(phi). Products reduce via s^2   = 2 + phi.
//
// Both are immutable value types with unique representations: equality is
// coefficient equality.  Signs are decided exactly by rational case analysis
// (at most two squarings); a float estimate is used only as a pre-filter
// with a conservative error bound.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>

namespace qk::exact {

using Rat = mpq_class;

inline int sgn(const Rat& x) { return mpq_sgn(x.get_mpq_t()); }

// num/den in lowest terms; den must be nonzero.
Rat make_rat(long num, long den = 1);

struct GoldenNum {
  Rat a{0};
  Rat b{0};  // value = a + b*phi

  GoldenNum() = default;
  GoldenNum(long v) : a(v) {}  // NOLINT: implicit ints are convenient
  explicit GoldenNum(Rat av) : a(std::move(av)) {}
  GoldenNum(Rat av, Rat bv) : a(std::move(av)), b(std::move(bv)) {}

  static GoldenNum phi() { return {Rat(0), Rat(1)}; }
  static GoldenNum inv_phi() { return {Rat(-1), Rat(1)}; }  // 1/phi = phi - 1

  bool is_zero() const { return a == 0 && b == 0; }
  bool is_integer() const { return b == 0 && a.get_den() == 1; }

  int sign() const;  // exact sign under the embedding phi = (1+sqrt5)/2
  double to_double() const;
  std::string str() const;  // canonical "a/b + c/d*phi"
};

GoldenNum operator+(const GoldenNum& x, const GoldenNum& y);
GoldenNum operator-(const GoldenNum& x, const GoldenNum& y);
GoldenNum operator-(const GoldenNum& x);
GoldenNum operator*(const GoldenNum& x, const GoldenNum& y);
GoldenNum operator/(const GoldenNum& x, const GoldenNum& y);
bool operator==(const GoldenNum& x, const GoldenNum& y);
bool operator!=(const GoldenNum& x, const GoldenNum& y);

// Multiplicative inverse; throws std::domain_error on zero.
GoldenNum inverse(const GoldenNum& x);

GoldenNum parse_golden(const std::string& text);

struct QuadExt {
  GoldenNum u;
  GoldenNum v;  // value = u + v*s

  QuadExt() = default;
  QuadExt(long x) : u(x) {}  // NOLINT
  explicit QuadExt(GoldenNum uu) : u(std::move(uu)) {}
  QuadExt(GoldenNum uu, GoldenNum vv) : u(std::move(uu)), v(std::move(vv)) {}

  static QuadExt s() { return {GoldenNum(0), GoldenNum(1)}; }
  static QuadExt phi() { return QuadExt(GoldenNum::phi()); }
  // sigma = s/(2*phi), the half-height constant of the kite construction
  static QuadExt sigma() { return {GoldenNum(0), GoldenNum(make_rat(-1, 2), make_rat(1, 2))}; }

  bool is_zero() const { return u.is_zero() && v.is_zero(); }

  int sign() const;
  double to_double() const;
  std::string str() const;  // canonical "a/b + c/d*phi + (e/f + g/h*phi)*s"
};

QuadExt operator+(const QuadExt& x, const QuadExt& y);
QuadExt operator-(const QuadExt& x, const QuadExt& y);
QuadExt operator-(const QuadExt& x);
QuadExt operator*(const QuadExt& x, const QuadExt& y);
QuadExt operator/(const QuadExt& x, const QuadExt& y);
QuadExt operator*(const GoldenNum& c, const QuadExt& x);
bool operator==(const QuadExt& x, const QuadExt& y);
bool operator!=(const QuadExt& x, const QuadExt& y);

QuadExt inverse(const QuadExt& x);

// Exact sign of u + v*s as a real number, in {-1, 0, +1}.
int quad_sign(const QuadExt& x);

// Double-precision embedding, within a few ulp of the exact value.
double to_float(const QuadExt& x);

QuadExt parse_quadext(const std::string& text);

inline constexpr double kPhi = 1.6180339887498948482;
inline constexpr double kS = 1.9021130325903071442;  // sqrt(2 + phi)

}  // namespace qk::exact
