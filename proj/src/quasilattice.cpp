#include "qk/quasilattice.hpp"

#include <mutex>
#include <sstream>
#include <stdexcept>

namespace qk::lattice {

using exact::make_rat;
using exact::Rat;

PlanarPoint operator+(const PlanarPoint& p, const PlanarPoint& q) {
  return {p.x + q.x, p.y + q.y};
}
PlanarPoint operator-(const PlanarPoint& p, const PlanarPoint& q) {
  return {p.x - q.x, p.y - q.y};
}
PlanarPoint operator-(const PlanarPoint& p) { return {-p.x, -p.y}; }
PlanarPoint operator*(const QuadExt& c, const PlanarPoint& p) { return {c * p.x, c * p.y}; }
bool operator==(const PlanarPoint& p, const PlanarPoint& q) { return p.x == q.x && p.y == q.y; }
bool operator!=(const PlanarPoint& p, const PlanarPoint& q) { return !(p == q); }

QuadExt dot(const PlanarPoint& p, const PlanarPoint& q) { return p.x * q.x + p.y * q.y; }
QuadExt cross(const PlanarPoint& p, const PlanarPoint& q) { return p.x * q.y - p.y * q.x; }
QuadExt norm2(const PlanarPoint& p) { return dot(p, p); }

template <class Tag>
std::string Tuple5<Tag>::str() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < 5; ++i) os << n[i] << (i < 4 ? "," : "]");
  return os.str();
}

template std::string Tuple5<DualStarTag>::str() const;
template std::string Tuple5<PrimalStarTag>::str() const;

namespace {

// cos(2 pi k / 5) and sin(2 pi k / 5) in Q(phi)[s]:
//   cos in {1, 1/(2phi), -phi/2}, sin in {0, +-s/2, +-s/(2phi)}
std::array<PlanarPoint, 5> make_primal_star() {
  const GoldenNum half = GoldenNum(make_rat(1, 2));
  const GoldenNum inv2phi = GoldenNum(make_rat(-1, 2), make_rat(1, 2));  // 1/(2phi)
  const GoldenNum mhalfphi = GoldenNum(Rat(0), make_rat(-1, 2));         // -phi/2

  auto C = [](GoldenNum g) { return QuadExt(std::move(g)); };
  auto S = [](GoldenNum g) { return QuadExt(GoldenNum(0), std::move(g)); };

  std::array<PlanarPoint, 5> y;
  y[0] = {C(GoldenNum(1)), S(GoldenNum(0))};
  y[1] = {C(inv2phi), S(half)};
  y[2] = {C(mhalfphi), S(inv2phi)};
  y[3] = {C(mhalfphi), S(-inv2phi)};
  y[4] = {C(inv2phi), S(-half)};
  return y;
}

std::array<PlanarPoint, 5> make_dual_star() {
  auto y = make_primal_star();
  std::array<PlanarPoint, 5> d;
  for (int k = 0; k < 5; ++k) d[k] = {-y[k].y, y[k].x};  // rotate by +pi/2
  return d;
}

}  // namespace

const PlanarPoint& star_vector(long long k, bool dual) {
  static const std::array<PlanarPoint, 5> primal = make_primal_star();
  static const std::array<PlanarPoint, 5> duals = make_dual_star();
  return dual ? duals[mod5(k)] : primal[mod5(k)];
}

PlanarPoint embed(const RVector& v) {
  PlanarPoint p{QuadExt(0), QuadExt(0)};
  for (int k = 0; k < 5; ++k) {
    if (v.n[k] == 0) continue;
    p = p + QuadExt(GoldenNum(v.n[k])) * star_vector(k, true);
  }
  return p;
}

PlanarPoint embed(const QVector& v) {
  PlanarPoint p{QuadExt(0), QuadExt(0)};
  for (int k = 0; k < 5; ++k) {
    if (v.n[k] == 0) continue;
    p = p + QuadExt(GoldenNum(v.n[k])) * star_vector(k, false);
  }
  return p;
}

namespace {

void check_scale_identities() {
  // (1/phi) Y*_j = Y*_{j-1} + Y*_{j+1}  and the phi counterpart, exactly.
  const QuadExt phi = QuadExt::phi();
  const QuadExt inv_phi = QuadExt(GoldenNum::inv_phi());
  for (int j = 0; j < 5; ++j) {
    for (bool dual : {false, true}) {
      const PlanarPoint& yj = star_vector(j, dual);
      PlanarPoint nb = star_vector(j - 1, dual) + star_vector(j + 1, dual);
      if (!(nb == inv_phi * yj)) throw std::logic_error("star identity (1/phi) failed");
      PlanarPoint tri = nb + yj;
      if (!(tri == phi * yj)) throw std::logic_error("star identity (phi) failed");
    }
  }
}

std::once_flag scale_checked;

template <class Tag>
Tuple5<Tag> scale_once_up(const Tuple5<Tag>& v) {
  std::array<std::int64_t, 5> m{};
  for (int j = 0; j < 5; ++j)
    m[j] = v.n[mod5(j - 1)] + v.n[j] + v.n[mod5(j + 1)];
  return Tuple5<Tag>::canonicalized(m);
}

template <class Tag>
Tuple5<Tag> scale_once_down(const Tuple5<Tag>& v) {
  std::array<std::int64_t, 5> m{};
  for (int j = 0; j < 5; ++j) m[j] = v.n[mod5(j - 1)] + v.n[mod5(j + 1)];
  return Tuple5<Tag>::canonicalized(m);
}

}  // namespace

template <class Tag>
Tuple5<Tag> phi_scale(const Tuple5<Tag>& v, int power) {
  std::call_once(scale_checked, check_scale_identities);
  Tuple5<Tag> t = v;
  for (int i = 0; i < (power < 0 ? -power : power); ++i) {
    if (t.linf() > (std::int64_t{1} << 60))
      throw std::overflow_error("phi_scale: tuple entries too large");
    t = power > 0 ? scale_once_up(t) : scale_once_down(t);
  }
  return t;
}

template Tuple5<DualStarTag> phi_scale(const Tuple5<DualStarTag>&, int);
template Tuple5<PrimalStarTag> phi_scale(const Tuple5<PrimalStarTag>&, int);

const std::array<std::pair<RVector, EdgeClass>, 20>& edge_class_table() {
  static const auto table = [] {
    std::array<std::pair<RVector, EdgeClass>, 20> t;
    int i = 0;
    for (int k = 0; k < 5; ++k) {
      RVector lk = RVector::unit(k);
      RVector sk = RVector::unit(k) + RVector::unit(k + 2);
      t[i++] = {lk, {EdgeClass::Kind::Long, k, +1}};
      t[i++] = {-lk, {EdgeClass::Kind::Long, k, -1}};
      t[i++] = {sk, {EdgeClass::Kind::Short, k, +1}};
      t[i++] = {-sk, {EdgeClass::Kind::Short, k, -1}};
    }
    return t;
  }();
  return table;
}

EdgeClass classify_edge(const RVector& delta) {
  for (const auto& [vec, cls] : edge_class_table())
    if (vec == delta) return cls;
  return {};
}

int edge_ray(const EdgeClass& c) {
  // Y*_k points at 90 + 72k degrees = (5 + 4k) * 18 degrees;
  // Y*_k + Y*_{k+2} bisects Y*_k and Y*_{k+2}: (9 + 4k) * 18 degrees.
  int base = c.kind == EdgeClass::Kind::Long ? 5 + 4 * c.k : 9 + 4 * c.k;
  if (c.sign < 0) base += 10;
  return base % 20;
}

bool self_test() {
  const QuadExt one(1);
  PlanarPoint sum_p{QuadExt(0), QuadExt(0)};
  PlanarPoint sum_d{QuadExt(0), QuadExt(0)};
  for (int k = 0; k < 5; ++k) {
    if (norm2(star_vector(k, false)) != one) return false;
    if (norm2(star_vector(k, true)) != one) return false;
    if (!dot(star_vector(k, false), star_vector(k, true)).is_zero()) return false;
    sum_p = sum_p + star_vector(k, false);
    sum_d = sum_d + star_vector(k, true);
  }
  if (!(sum_p.x.is_zero() && sum_p.y.is_zero())) return false;
  if (!(sum_d.x.is_zero() && sum_d.y.is_zero())) return false;
  check_scale_identities();
  return true;
}

}  // namespace qk::lattice
