#pragma once
// The pentagonal stars {Y_k} and {Y*_k}, and the quasilattices Q (primal) and
// R (dual) they generate.
//
//   Y_k  = (cos 2pi k/5, sin 2pi k/5)       unit vectors, sum to zero
//   Y*_k = Y_k rotated by +pi/2
//
// Points of Q and R are integer 5-tuples of star coefficients.  The all-ones
// tuple embeds to zero, so tuples are kept in the canonical form n[4] == 0;
// equality of canonical tuples is equality of embedded points.  The two
// bases share one tuple representation distinguished by a tag type, so mixing
// them in arithmetic is a compile error.
//
// Scaling by phi is the integer substitution e_j -> e_{j-1} + e_j + e_{j+1},
// and by 1/phi the substitution e_j -> e_{j-1} + e_{j+1}; both identities are
// re-verified exactly on first use.

#include <array>
#include <cstdint>
#include <string>

#include "qk/golden.hpp"

namespace qk::lattice {

using exact::GoldenNum;
using exact::QuadExt;

inline int mod5(long long k) { return static_cast<int>(((k % 5) + 5) % 5); }

struct PlanarPoint {
  QuadExt x;
  QuadExt y;

  double fx() const { return exact::to_float(x); }
  double fy() const { return exact::to_float(y); }
};

PlanarPoint operator+(const PlanarPoint& p, const PlanarPoint& q);
PlanarPoint operator-(const PlanarPoint& p, const PlanarPoint& q);
PlanarPoint operator-(const PlanarPoint& p);
PlanarPoint operator*(const QuadExt& c, const PlanarPoint& p);
bool operator==(const PlanarPoint& p, const PlanarPoint& q);
bool operator!=(const PlanarPoint& p, const PlanarPoint& q);

QuadExt dot(const PlanarPoint& p, const PlanarPoint& q);
QuadExt cross(const PlanarPoint& p, const PlanarPoint& q);
QuadExt norm2(const PlanarPoint& p);

struct DualStarTag;    // R: coefficients of Y*_0..Y*_4
struct PrimalStarTag;  // Q: coefficients of Y_0..Y_4

template <class Tag>
struct Tuple5 {
  std::array<std::int64_t, 5> n{};  // canonical: n[4] == 0

  static Tuple5 canonicalized(const std::array<std::int64_t, 5>& raw) {
    Tuple5 t;
    for (int i = 0; i < 5; ++i) t.n[i] = raw[i] - raw[4];
    return t;
  }

  static Tuple5 unit(long long k) {
    std::array<std::int64_t, 5> raw{};
    raw[mod5(k)] = 1;
    return canonicalized(raw);
  }

  bool is_zero() const {
    return n[0] == 0 && n[1] == 0 && n[2] == 0 && n[3] == 0 && n[4] == 0;
  }

  std::int64_t linf() const {
    std::int64_t m = 0;
    for (auto v : n) m = std::max(m, v < 0 ? -v : v);
    return m;
  }

  friend Tuple5 operator+(const Tuple5& a, const Tuple5& b) {
    Tuple5 t;
    for (int i = 0; i < 5; ++i) t.n[i] = a.n[i] + b.n[i];
    return t;
  }
  friend Tuple5 operator-(const Tuple5& a, const Tuple5& b) {
    Tuple5 t;
    for (int i = 0; i < 5; ++i) t.n[i] = a.n[i] - b.n[i];
    return t;
  }
  friend Tuple5 operator-(const Tuple5& a) {
    Tuple5 t;
    for (int i = 0; i < 5; ++i) t.n[i] = -a.n[i];
    return t;
  }
  friend Tuple5 operator*(std::int64_t c, const Tuple5& a) {
    Tuple5 t;
    for (int i = 0; i < 5; ++i) t.n[i] = c * a.n[i];
    return t;
  }
  friend bool operator==(const Tuple5& a, const Tuple5& b) { return a.n == b.n; }
  friend bool operator!=(const Tuple5& a, const Tuple5& b) { return a.n != b.n; }
  friend bool operator<(const Tuple5& a, const Tuple5& b) { return a.n < b.n; }

  std::uint64_t hash() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (auto v : n) {
      h ^= static_cast<std::uint64_t>(v);
      h *= 0x100000001b3ull;
    }
    return h;
  }

  std::string str() const;
};

using RVector = Tuple5<DualStarTag>;   // points/vectors of R
using QVector = Tuple5<PrimalStarTag>; // points/vectors of Q

template <class Tag>
Tuple5<Tag> canonicalize(const std::array<std::int64_t, 5>& raw) {
  return Tuple5<Tag>::canonicalized(raw);
}

// Exact star vectors: Y_k (dual == false) or Y*_k (dual == true).
const PlanarPoint& star_vector(long long k, bool dual);

PlanarPoint embed(const RVector& v);
PlanarPoint embed(const QVector& v);

// embed(result) = phi^power * embed(v), for any integer power (R and Q are
// closed under multiplication and division by phi).
template <class Tag>
Tuple5<Tag> phi_scale(const Tuple5<Tag>& v, int power);

struct EdgeClass {
  enum class Kind { Long, Short, NotAnEdge };
  Kind kind = Kind::NotAnEdge;
  int k = 0;     // star index of the class representative
  int sign = 0;  // +1 or -1 (0 for NotAnEdge)

  bool is_edge() const { return kind != Kind::NotAnEdge; }
  friend bool operator==(const EdgeClass& a, const EdgeClass& b) {
    return a.kind == b.kind && a.k == b.k && a.sign == b.sign;
  }
};

// Long(k, +-): delta == +-Y*_k (length 1).
// Short(k, +-): delta == +-(Y*_k + Y*_{k+2}) (length 1/phi).
EdgeClass classify_edge(const RVector& delta);

// The 20 signed edge vectors recognized by classify_edge, as canonical tuples.
const std::array<std::pair<RVector, EdgeClass>, 20>& edge_class_table();

// Direction of an edge vector in 18-degree units: an odd residue mod 20.
int edge_ray(const EdgeClass& c);

// Exact self-checks: star norms, the kernel relation, and the phi identities.
bool self_test();

}  // namespace qk::lattice
