#include "qk/golden.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace qk::exact {

Rat make_rat(long num, long den) {
  if (den == 0) throw std::domain_error("make_rat: zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

GoldenNum operator+(const GoldenNum& x, const GoldenNum& y) {
  return {Rat(x.a + y.a), Rat(x.b + y.b)};
}

GoldenNum operator-(const GoldenNum& x, const GoldenNum& y) {
  return {Rat(x.a - y.a), Rat(x.b - y.b)};
}

GoldenNum operator-(const GoldenNum& x) { return {Rat(-x.a), Rat(-x.b)}; }

GoldenNum operator*(const GoldenNum& x, const GoldenNum& y) {
  // (a1 + b1 phi)(a2 + b2 phi) with phi^2 = phi + 1
  Rat bb = x.b * y.b;
  Rat a = x.a * y.a + bb;
  Rat b = x.a * y.b + x.b * y.a + bb;
  return {std::move(a), std::move(b)};
}

GoldenNum inverse(const GoldenNum& x) {
  // conjugate is a + b*(1 - phi); field norm a^2 + ab - b^2
  Rat n = x.a * x.a + x.a * x.b - x.b * x.b;
  if (n == 0) throw std::domain_error("GoldenNum: division by zero");
  Rat a = (x.a + x.b) / n;
  Rat b = -x.b / n;
  return {std::move(a), std::move(b)};
}

GoldenNum operator/(const GoldenNum& x, const GoldenNum& y) { return x * inverse(y); }

bool operator==(const GoldenNum& x, const GoldenNum& y) { return x.a == y.a && x.b == y.b; }
bool operator!=(const GoldenNum& x, const GoldenNum& y) { return !(x == y); }

int GoldenNum::sign() const {
  // a + b*phi = ((2a + b) + b*sqrt5) / 2
  Rat u = 2 * a + b;
  const Rat& v = b;
  int su = sgn(u);
  int sv = sgn(v);
  if (sv == 0) return su;
  if (su == 0) return sv;
  if (su == sv) return su;
  // opposite signs: compare u^2 against 5 v^2
  Rat t = u * u - 5 * v * v;
  return su * sgn(t);
}

double GoldenNum::to_double() const { return a.get_d() + b.get_d() * kPhi; }

static std::string rat_str(const Rat& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string GoldenNum::str() const { return rat_str(a) + " + " + rat_str(b) + "*phi"; }

QuadExt operator+(const QuadExt& x, const QuadExt& y) { return {x.u + y.u, x.v + y.v}; }
QuadExt operator-(const QuadExt& x, const QuadExt& y) { return {x.u - y.u, x.v - y.v}; }
QuadExt operator-(const QuadExt& x) { return {-x.u, -x.v}; }

QuadExt operator*(const QuadExt& x, const QuadExt& y) {
  // (u1 + v1 s)(u2 + v2 s) with s^2 = 2 + phi
  static const GoldenNum two_plus_phi{Rat(2), Rat(1)};
  GoldenNum u = x.u * y.u + x.v * y.v * two_plus_phi;
  GoldenNum v = x.u * y.v + x.v * y.u;
  return {std::move(u), std::move(v)};
}

QuadExt operator*(const GoldenNum& c, const QuadExt& x) { return {c * x.u, c * x.v}; }

QuadExt inverse(const QuadExt& x) {
  static const GoldenNum two_plus_phi{Rat(2), Rat(1)};
  // s is not in Q(phi), so the denominator vanishes only at zero
  GoldenNum d = x.u * x.u - x.v * x.v * two_plus_phi;
  if (d.is_zero()) throw std::domain_error("QuadExt: division by zero");
  GoldenNum di = inverse(d);
  return {x.u * di, -x.v * di};
}

QuadExt operator/(const QuadExt& x, const QuadExt& y) { return x * inverse(y); }

bool operator==(const QuadExt& x, const QuadExt& y) { return x.u == y.u && x.v == y.v; }
bool operator!=(const QuadExt& x, const QuadExt& y) { return !(x == y); }

int quad_sign(const QuadExt& x) {
  int su = x.u.sign();
  int sv = x.v.sign();
  if (sv == 0) return su;
  if (su == 0) return sv;
  if (su == sv) return su;

  // Pre-filter: a double estimate whose error bound keeps the decision sound.
  double fu = x.u.to_double();
  double fv = x.v.to_double();
  double est = fu + fv * kS;
  double bound = (std::fabs(fu) + std::fabs(fv) * kS) * 1e-12;
  if (std::fabs(est) > bound) return est > 0 ? 1 : -1;

  // opposite signs: compare u^2 against v^2 (2 + phi)
  static const GoldenNum two_plus_phi{Rat(2), Rat(1)};
  GoldenNum t = x.u * x.u - x.v * x.v * two_plus_phi;
  return su * t.sign();
}

int QuadExt::sign() const { return quad_sign(*this); }

double to_float(const QuadExt& x) { return x.u.to_double() + x.v.to_double() * kS; }

double QuadExt::to_double() const { return to_float(*this); }

std::string QuadExt::str() const { return u.str() + " + (" + v.str() + ")*s"; }

static Rat parse_rat(const std::string& text) {
  Rat r;
  if (r.set_str(text, 10) != 0) throw std::invalid_argument("bad rational: '" + text + "'");
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: '" + text + "'");
  r.canonicalize();
  return r;
}

GoldenNum parse_golden(const std::string& text) {
  // "a/b + c/d*phi"
  auto star = text.rfind("*phi");
  if (star == std::string::npos) throw std::invalid_argument("bad GoldenNum: '" + text + "'");
  auto plus = text.rfind(" + ", star);
  if (plus == std::string::npos) throw std::invalid_argument("bad GoldenNum: '" + text + "'");
  Rat a = parse_rat(text.substr(0, plus));
  Rat b = parse_rat(text.substr(plus + 3, star - plus - 3));
  return {std::move(a), std::move(b)};
}

QuadExt parse_quadext(const std::string& text) {
  // "<golden> + (<golden>)*s"
  auto open = text.rfind(" + (");
  auto close = text.rfind(")*s");
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw std::invalid_argument("bad QuadExt: '" + text + "'");
  GoldenNum u = parse_golden(text.substr(0, open));
  GoldenNum v = parse_golden(text.substr(open + 4, close - open - 4));
  return {std::move(u), std::move(v)};
}

}  // namespace qk::exact
