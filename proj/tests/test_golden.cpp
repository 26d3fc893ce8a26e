#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "qk/golden.hpp"
#include "qk/rng.hpp"

using namespace qk::exact;

namespace {

Rat random_rat(qk::SampleRng& rng) { return make_rat(rng.integer(-99, 99), rng.integer(1, 99)); }

GoldenNum random_golden(qk::SampleRng& rng) { return {random_rat(rng), random_rat(rng)}; }

QuadExt random_quad(qk::SampleRng& rng) { return {random_golden(rng), random_golden(rng)}; }

}  // namespace

TEST_CASE("defining relations") {
  const GoldenNum phi = GoldenNum::phi();
  CHECK(phi * phi == GoldenNum(1) + phi);
  CHECK(QuadExt::s() * QuadExt::s() == QuadExt(GoldenNum(Rat(2), Rat(1))));
}

TEST_CASE("golden inverse of phi") {
  const GoldenNum phi = GoldenNum::phi();
  GoldenNum inv = GoldenNum(1) / phi;
  CHECK(inv == GoldenNum(Rat(-1), Rat(1)));
  CHECK(inv * phi == GoldenNum(1));
  CHECK(inv == GoldenNum::inv_phi());
}

TEST_CASE("multiplicative identities on random elements") {
  for (int i = 0; i < 300; ++i) {
    qk::SampleRng rng(11, 0, i);
    GoldenNum x = random_golden(rng);
    CHECK(x * GoldenNum(1) == x);
    QuadExt q = random_quad(rng);
    CHECK(q * QuadExt(1) == q);
    CHECK(q * QuadExt(0) == QuadExt(0));
  }
}

TEST_CASE("field axioms hold exactly on random triples") {
  for (int i = 0; i < 300; ++i) {
    qk::SampleRng rng(12, 0, i);
    GoldenNum a = random_golden(rng), b = random_golden(rng), c = random_golden(rng);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    QuadExt x = random_quad(rng), y = random_quad(rng), z = random_quad(rng);
    CHECK((x + y) + z == x + (y + z));
    CHECK((x * y) * z == x * (y * z));
    CHECK(x * (y + z) == x * y + x * z);
  }
}

TEST_CASE("exact inverses") {
  for (int i = 0; i < 300; ++i) {
    qk::SampleRng rng(13, 0, i);
    GoldenNum x = random_golden(rng);
    if (!x.is_zero()) CHECK(x * inverse(x) == GoldenNum(1));
    QuadExt q = random_quad(rng);
    if (!q.is_zero()) CHECK(q * inverse(q) == QuadExt(1));
  }
  CHECK_THROWS_AS(inverse(GoldenNum(0)), std::domain_error);
  CHECK_THROWS_AS(inverse(QuadExt(0)), std::domain_error);
  CHECK_THROWS_AS(GoldenNum(1) / GoldenNum(0), std::domain_error);
  CHECK_THROWS_AS(QuadExt(1) / QuadExt(0), std::domain_error);
}

TEST_CASE("unit norm of the first star vector") {
  // (1/(2 phi))^2 + (s/2)^2 = 1
  const GoldenNum half = GoldenNum(make_rat(1, 2));
  QuadExt x = QuadExt(half * GoldenNum::inv_phi());
  QuadExt y = QuadExt(GoldenNum(0), half);
  CHECK(x * x + y * y == QuadExt(1));
}

TEST_CASE("exact signs") {
  CHECK(quad_sign(QuadExt(0)) == 0);
  // 2 - phi = (3 - sqrt5)/2 > 0
  CHECK(quad_sign(QuadExt(GoldenNum(Rat(2), Rat(-1)))) == 1);
  // phi - s < 0 since phi^2 = 1 + phi < 2 + phi = s^2
  CHECK(quad_sign(QuadExt(GoldenNum::phi(), GoldenNum(-1))) == -1);
  CHECK(quad_sign(QuadExt(GoldenNum(0), GoldenNum(1))) == 1);
  CHECK(quad_sign(-QuadExt::sigma()) == -1);
}

TEST_CASE("quad_sign agrees with the float embedding away from zero") {
  for (int i = 0; i < 1000; ++i) {
    qk::SampleRng rng(14, 0, i);
    QuadExt q = random_quad(rng);
    double f = to_float(q);
    if (std::fabs(f) > 1e-9) CHECK(quad_sign(q) == (f > 0 ? 1 : -1));
  }
}

TEST_CASE("float embedding of named constants") {
  CHECK(GoldenNum::phi().to_double() == doctest::Approx(1.6180339887498949).epsilon(1e-14));
  CHECK(to_float(QuadExt(0)) == 0.0);
  // sigma = s/(2 phi) = sin(36 degrees)
  CHECK(to_float(QuadExt::sigma()) == doctest::Approx(0.5877852522924731).epsilon(1e-14));
  CHECK(to_float(QuadExt::s()) == doctest::Approx(1.9021130325903071).epsilon(1e-14));
}

TEST_CASE("canonical text form and round-trip") {
  GoldenNum g(make_rat(1, 2), make_rat(-3, 4));
  CHECK(g.str() == "1/2 + -3/4*phi");
  QuadExt q(g, GoldenNum(make_rat(0, 1), make_rat(5, 7)));
  CHECK(q.str() == "1/2 + -3/4*phi + (0/1 + 5/7*phi)*s");
  CHECK(parse_quadext(q.str()) == q);
  CHECK(parse_golden(g.str()) == g);
  for (int i = 0; i < 100; ++i) {
    qk::SampleRng rng(15, 0, i);
    QuadExt x = random_quad(rng);
    CHECK(parse_quadext(x.str()) == x);
  }
  CHECK_THROWS_AS(parse_golden("walnut"), std::invalid_argument);
  CHECK_THROWS_AS(parse_quadext("1/2 + 1/2*phi"), std::invalid_argument);
}
