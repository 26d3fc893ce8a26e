#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "qk/quasilattice.hpp"
#include "qk/rng.hpp"

using namespace qk::lattice;
using qk::exact::GoldenNum;
using qk::exact::make_rat;
using qk::exact::QuadExt;
using qk::exact::to_float;

namespace {

RVector random_rvec(qk::SampleRng& rng, int span = 9) {
  std::array<std::int64_t, 5> raw{};
  for (auto& v : raw) v = rng.integer(-span, span);
  return RVector::canonicalized(raw);
}

// float embedding of a raw (non-canonical) tuple, summed term by term
std::pair<double, double> raw_embed_float(const std::array<std::int64_t, 5>& raw) {
  double x = 0, y = 0;
  for (int k = 0; k < 5; ++k) {
    const auto& v = star_vector(k, true);
    x += static_cast<double>(raw[k]) * v.fx();
    y += static_cast<double>(raw[k]) * v.fy();
  }
  return {x, y};
}

}  // namespace

TEST_CASE("module self test") { CHECK(self_test()); }

TEST_CASE("star vector values") {
  const QuadExt zero(0), one(1);
  // Y*_0 = (0, 1)
  CHECK(star_vector(0, true).x == zero);
  CHECK(star_vector(0, true).y == one);
  // Y_1 = (1/(2 phi), s/2)
  const GoldenNum half = GoldenNum(make_rat(1, 2));
  CHECK(star_vector(1, false).x == QuadExt(half * GoldenNum::inv_phi()));
  CHECK(star_vector(1, false).y == QuadExt(GoldenNum(0), half));
  // Y*_1 = (-s/2, 1/(2 phi))
  CHECK(star_vector(1, true).x == QuadExt(GoldenNum(0), -half));
  CHECK(star_vector(1, true).y == QuadExt(half * GoldenNum::inv_phi()));
}

TEST_CASE("stars sum to zero and have unit norm") {
  for (bool dual : {false, true}) {
    PlanarPoint sum{QuadExt(0), QuadExt(0)};
    for (int k = 0; k < 5; ++k) {
      sum = sum + star_vector(k, dual);
      CHECK(norm2(star_vector(k, dual)) == QuadExt(1));
    }
    CHECK(sum.x == QuadExt(0));
    CHECK(sum.y == QuadExt(0));
  }
}

TEST_CASE("each dual vector is orthogonal to its primal partner") {
  for (int k = 0; k < 5; ++k)
    CHECK(dot(star_vector(k, false), star_vector(k, true)) == QuadExt(0));
}

TEST_CASE("canonicalization") {
  CHECK(RVector::canonicalized({1, 1, 1, 1, 1}).is_zero());
  CHECK(RVector::canonicalized({0, 0, 0, 0, 0}).is_zero());
  RVector v = RVector::canonicalized({2, 0, 0, 0, 1});
  CHECK(v.n == std::array<std::int64_t, 5>{1, -1, -1, -1, 0});
  auto [rx, ry] = raw_embed_float({2, 0, 0, 0, 1});
  auto e = embed(v);
  CHECK(std::fabs(e.fx() - rx) <= 1e-12);
  CHECK(std::fabs(e.fy() - ry) <= 1e-12);
}

TEST_CASE("canonicalize is idempotent and embedding-preserving") {
  for (int i = 0; i < 200; ++i) {
    qk::SampleRng rng(21, 0, i);
    std::array<std::int64_t, 5> raw{};
    for (auto& v : raw) v = rng.integer(-20, 20);
    RVector v = RVector::canonicalized(raw);
    CHECK(RVector::canonicalized(v.n) == v);
    // exact: embedding of the raw tuple equals embedding of the canonical one
    PlanarPoint raw_exact{QuadExt(0), QuadExt(0)};
    for (int k = 0; k < 5; ++k)
      raw_exact = raw_exact +
                  QuadExt(GoldenNum(static_cast<long>(raw[k]))) * star_vector(k, true);
    CHECK(raw_exact == embed(v));
  }
}

TEST_CASE("embedding values") {
  CHECK(embed(RVector::unit(0)).x == QuadExt(0));
  CHECK(embed(RVector::unit(0)).y == QuadExt(1));
  CHECK(embed(RVector{}).x == QuadExt(0));
  // |Y*_1 + Y*_3|^2 = 2 - phi = 1/phi^2
  RVector v = RVector::unit(1) + RVector::unit(3);
  CHECK(norm2(embed(v)) == QuadExt(GoldenNum(qk::exact::Rat(2), qk::exact::Rat(-1))));
}

TEST_CASE("phi scaling") {
  RVector e0 = RVector::unit(0);
  RVector s1 = phi_scale(e0, 1);
  CHECK(s1.n == std::array<std::int64_t, 5>{0, 0, -1, -1, 0});
  auto e = embed(e0);
  auto se = embed(s1);
  CHECK(std::fabs(se.fx() - qk::exact::kPhi * e.fx()) <= 1e-12);
  CHECK(std::fabs(se.fy() - qk::exact::kPhi * e.fy()) <= 1e-12);
  // exact: embed(phi_scale(v)) = phi * embed(v)
  CHECK(embed(s1) == QuadExt::phi() * embed(e0));

  for (int i = 0; i < 100; ++i) {
    qk::SampleRng rng(22, 0, i);
    RVector v = random_rvec(rng);
    CHECK(phi_scale(v, 0) == v);
    CHECK(phi_scale(phi_scale(v, 1), 1) == phi_scale(v, 2));
    CHECK(embed(phi_scale(v, 1)) == QuadExt::phi() * embed(v));
    // closure under division by phi
    CHECK(phi_scale(phi_scale(v, 1), -1) == v);
    CHECK(embed(phi_scale(v, -1)) == QuadExt(GoldenNum::inv_phi()) * embed(v));
    RVector w = random_rvec(rng);
    CHECK(phi_scale(v + w, 1) == phi_scale(v, 1) + phi_scale(w, 1));
    if (v != w) CHECK(phi_scale(v, 1) != phi_scale(w, 1));
  }
}

TEST_CASE("edge classification") {
  EdgeClass c = classify_edge(RVector::unit(2));
  CHECK(c.kind == EdgeClass::Kind::Long);
  CHECK(c.k == 2);
  CHECK(c.sign == 1);

  CHECK(!classify_edge(RVector{}).is_edge());

  EdgeClass s = classify_edge(-(RVector::unit(1) + RVector::unit(3)));
  CHECK(s.kind == EdgeClass::Kind::Short);
  CHECK(s.k == 1);
  CHECK(s.sign == -1);
  // short edges have length 1/phi
  CHECK(norm2(embed(RVector::unit(1) + RVector::unit(3))) ==
        QuadExt(GoldenNum(qk::exact::Rat(2), qk::exact::Rat(-1))));
}

TEST_CASE("the twenty signed edge vectors are pairwise distinct") {
  std::set<std::array<std::int64_t, 5>> seen;
  for (const auto& [vec, cls] : edge_class_table()) {
    CHECK(cls.is_edge());
    CHECK(seen.insert(vec.n).second);
  }
  CHECK(seen.size() == 20);
}

TEST_CASE("edge classes carry the exact lengths") {
  const QuadExt one(1);
  const QuadExt inv_phi_sq(GoldenNum(qk::exact::Rat(2), qk::exact::Rat(-1)));
  for (const auto& [vec, cls] : edge_class_table())
    CHECK(norm2(embed(vec)) == (cls.kind == EdgeClass::Kind::Long ? one : inv_phi_sq));
}

TEST_CASE("generic tuples are not edges") {
  int nonedges = 0;
  for (int i = 0; i < 200; ++i) {
    qk::SampleRng rng(23, 0, i);
    RVector v = random_rvec(rng, 4);
    if (!classify_edge(v).is_edge()) ++nonedges;
  }
  CHECK(nonedges > 150);
}

TEST_CASE("edge rays sit on the odd 18-degree grid") {
  for (const auto& [vec, cls] : edge_class_table()) {
    int r = edge_ray(cls);
    CHECK(r % 2 == 1);
    auto e = embed(vec);
    double ang = std::atan2(e.fy(), e.fx()) * 180.0 / M_PI;
    double want = std::fmod(r * 18.0 + 360.0, 360.0);
    double got = std::fmod(ang + 360.0, 360.0);
    CHECK(std::fabs(got - want) <= 1e-9);
  }
}

TEST_CASE("mixing the bases is a type error (compile-time property)") {
  // QVector and RVector share the representation but not the type; this test
  // documents the intent with the operations that are allowed.
  QVector q = QVector::unit(1);
  RVector r = RVector::unit(1);
  CHECK(embed(q).x != embed(r).x);  // Y_1 vs Y*_1
}
