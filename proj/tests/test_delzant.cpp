#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "qk/atlas_checks.hpp"
#include "qk/delzant.hpp"

using namespace qk::delzant;
using qk::Exec;
using qk::Report;
using qk::SampleRng;
using qk::exact::GoldenNum;
using qk::exact::kPhi;
using qk::exact::make_rat;
using qk::exact::QuadExt;
using qk::exact::Rat;
using qk::exact::to_float;
using qk::lattice::dot;
using qk::lattice::embed;
using qk::lattice::QVector;
using qk::lattice::RVector;

namespace {

const QuadExt kMinusHalfS{GoldenNum(0), GoldenNum(make_rat(-1, 2))};

// independent implementation of the closed-form (1,2) -> (3,4) lift
Point4 reference_lift_12_34(const Point4& p) {
  const double sigma = to_float(QuadExt::sigma());
  const double r1 = p[0], t1 = p[1], r2 = p[2], t2 = p[3];
  return {std::sqrt(kPhi * sigma - r1 * r1 - r2 * r2 / kPhi), -(t1 + t2) / kPhi,
          std::sqrt((sigma + r1 * r1 - r2 * r2) / kPhi), t1 / kPhi - t2};
}

const Mat4I kPaperF{0, 0, 0, -1, 0, -1, -1, 0, -1, 0, 0, 1, 0, -1, 0, 0};

}  // namespace

TEST_CASE("kite polytope data") {
  auto [poly, data] = kite_polytope(0, +1);
  CHECK(data.lambda[0] == kMinusHalfS);
  CHECK(data.lambda[1] == QuadExt(0));
  CHECK(data.lambda[2] == QuadExt(0));
  CHECK(data.lambda[3] == kMinusHalfS);
  CHECK(data.X[0] == -QVector::unit(1));
  CHECK(data.X[1] == QVector::unit(2));
  CHECK(data.X[2] == -QVector::unit(3));
  CHECK(data.X[3] == QVector::unit(4));
  CHECK(data.sigma == QuadExt::sigma());

  // vertex A = (0,1) meets facet 1 with equality: <A, X_1> = -s/2
  CHECK(dot(poly.vertices[2], embed(data.X[0])) == data.lambda[0]);
  // E = (0,0) gives equality on the zero-offset facets 2 and 3
  CHECK(dot(poly.vertices[0], embed(data.X[1])) == QuadExt(0));
  CHECK(dot(poly.vertices[0], embed(data.X[2])) == QuadExt(0));
}

TEST_CASE("all ten kites build and validate") {
  for (int sign : {+1, -1})
    for (int k = 0; k < 5; ++k) CHECK_NOTHROW(kite_polytope(k, sign));
  CHECK_THROWS_AS(kite_polytope(0, 3), std::invalid_argument);
}

TEST_CASE("the quoted star relations hold exactly") {
  // Y_2 = -Y_1 - phi Y_4 and Y_3 = -phi Y_1 - Y_4
  const QuadExt phi = QuadExt::phi();
  auto Y = [](int k) { return embed(QVector::unit(k)); };
  CHECK(Y(2) == -Y(1) - phi * Y(4));
  CHECK(Y(3) == -(phi * Y(1)) - Y(4));
}

TEST_CASE("kernel bases") {
  auto data = kite_polytope(0, +1).second;
  auto kb = kernel_basis(data);

  const GoldenNum ip = GoldenNum::inv_phi();
  CHECK(kb.b12[0] == Golden4{GoldenNum(1), ip, GoldenNum(1), GoldenNum(0)});
  CHECK(kb.b12[1] == Golden4{-ip, ip, GoldenNum(0), GoldenNum(1)});
  CHECK(kb.b34[0] == Golden4{GoldenNum(1), GoldenNum(0), ip, -ip});
  CHECK(kb.b34[1] == Golden4{GoldenNum(0), GoldenNum(1), ip, GoldenNum(1)});

  // pi of every row is exactly zero
  for (const auto& row : {kb.b12[0], kb.b12[1], kb.b34[0], kb.b34[1]}) {
    qk::lattice::PlanarPoint acc{QuadExt(0), QuadExt(0)};
    for (int j = 0; j < 4; ++j) acc = acc + QuadExt(row[j]) * embed(data.X[j]);
    CHECK(acc.x == QuadExt(0));
    CHECK(acc.y == QuadExt(0));
  }

  CHECK(kb.change_of_basis[0][0] == ip);
  CHECK(kb.change_of_basis[0][1] == -ip);
  CHECK(kb.change_of_basis[1][0] == ip);
  CHECK(kb.change_of_basis[1][1] == GoldenNum(1));
  CHECK(kb.det == GoldenNum(1));

  // same kernel data for every kite
  for (int sign : {+1, -1})
    for (int k = 0; k < 5; ++k) CHECK_NOTHROW(kernel_basis(kite_polytope(k, sign).second));
}

TEST_CASE("ambient moment map") {
  auto data = kite_polytope(0, +1).second;
  Complex4 z{};
  auto j0 = ambient_moment_map(z, data.lambda);
  for (int i = 0; i < 4; ++i) CHECK(j0[i] == doctest::Approx(to_float(data.lambda[i])));

  std::array<QuadExt, 4> zero_lambda{QuadExt(0), QuadExt(0), QuadExt(0), QuadExt(0)};
  Complex4 z1{std::complex<double>(0, 1), 0, 0, 0};
  auto j1 = ambient_moment_map(z1, zero_lambda);
  CHECK(j1[0] == doctest::Approx(1.0));
  CHECK(j1[1] == 0.0);

  // image lies in lambda + the positive orthant
  for (int i = 0; i < 1000; ++i) {
    SampleRng rng(31, 0, i);
    Complex4 zr;
    for (auto& c : zr) c = {rng.uniform(-2, 2), rng.uniform(-2, 2)};
    auto J = ambient_moment_map(zr, data.lambda);
    for (int q = 0; q < 4; ++q) CHECK(J[q] >= to_float(data.lambda[q]));
  }
}

TEST_CASE("reduced moment map constants at the origin") {
  Complex4 z{};
  const double sigma = to_float(QuadExt::sigma());
  auto psi12 = reduced_moment_map(z, BasisTag::B12);
  CHECK(psi12[0] == doctest::Approx(-kPhi * sigma).epsilon(1e-15));
  CHECK(psi12[1] == doctest::Approx(-sigma / kPhi).epsilon(1e-15));
  auto psi34 = reduced_moment_map(z, BasisTag::B34);
  CHECK(psi34[0] == doctest::Approx(-sigma / kPhi).epsilon(1e-15));
  CHECK(psi34[1] == doctest::Approx(-kPhi * sigma).epsilon(1e-15));
}

TEST_CASE("the two reduced maps agree through the change of basis") {
  auto kb = kernel_basis(kite_polytope(0, +1).second);
  double m00 = kb.change_of_basis[0][0].to_double();
  double m01 = kb.change_of_basis[0][1].to_double();
  double m10 = kb.change_of_basis[1][0].to_double();
  double m11 = kb.change_of_basis[1][1].to_double();
  for (int i = 0; i < 1000; ++i) {
    SampleRng rng(32, 0, i);
    Complex4 z;
    for (auto& c : z) c = {rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
    auto p12 = reduced_moment_map(z, BasisTag::B12);
    auto p34 = reduced_moment_map(z, BasisTag::B34);
    CHECK(std::fabs(m00 * p12[0] + m01 * p12[1] - p34[0]) <= 1e-12);
    CHECK(std::fabs(m10 * p12[0] + m11 * p12[1] - p34[1]) <= 1e-12);
  }
}

TEST_CASE("chart slices") {
  const double sigma = to_float(QuadExt::sigma());
  auto z12 = chart_slice(chart(1, 2), 0.0, 0.0);
  CHECK(std::abs(z12[0]) == 0.0);
  CHECK(std::abs(z12[1]) == 0.0);
  CHECK(z12[2].real() == doctest::Approx(std::sqrt(kPhi * sigma)).epsilon(1e-15));
  CHECK(z12[3].real() == doctest::Approx(std::sqrt(sigma / kPhi)).epsilon(1e-15));

  auto z34 = chart_slice(chart(3, 4), 0.0, 0.0);
  CHECK(z34[0].real() == doctest::Approx(std::sqrt(sigma / kPhi)).epsilon(1e-15));
  CHECK(z34[1].real() == doctest::Approx(std::sqrt(sigma * kPhi)).epsilon(1e-15));

  CHECK_THROWS_AS(chart_slice(chart(1, 2), 5.0, 0.0), std::domain_error);

  // on-domain slices keep the complementary moduli strictly positive and
  // land on the zero level set
  for (const auto& c : kite_charts()) {
    for (int i = 0; i < 200; ++i) {
      SampleRng rng(33, c.pair[0], i);
      Point4 p = sample_domain_point(c, rng, 0.01);
      auto z = chart_slice(c, {p[0] * std::cos(p[1]), p[0] * std::sin(p[1])},
                           {p[2] * std::cos(p[3]), p[2] * std::sin(p[3])});
      CHECK(std::abs(z[c.comp[0] - 1]) > 0);
      CHECK(std::abs(z[c.comp[1] - 1]) > 0);
      auto psi = reduced_moment_map(z, c);
      CHECK(std::fabs(psi[0]) <= 1e-12);
      CHECK(std::fabs(psi[1]) <= 1e-12);
    }
  }
}

TEST_CASE("exact corner moduli") {
  auto sq12 = chart_slice_zero_sq(chart(1, 2));
  // |z_3|^2 = phi sigma = s/2, |z_4|^2 = sigma/phi
  CHECK(sq12[2] == QuadExt(GoldenNum(0), GoldenNum(make_rat(1, 2))));
  CHECK(sq12[3] == QuadExt(GoldenNum(0), GoldenNum(Rat(1), make_rat(-1, 2))));
  CHECK(sq12[0] == QuadExt(0));
  CHECK(sq12[1] == QuadExt(0));
}

TEST_CASE("exact domain membership decides boundary points") {
  const auto& c12 = chart(1, 2);
  CHECK(chart_contains_sq(c12, QuadExt(0), QuadExt(0)));
  // |w_1|^2 = phi sigma puts the point exactly on the first facet: excluded
  QuadExt phi_sigma = c12.radicand[0].c0;
  CHECK(!chart_contains_sq(c12, phi_sigma, QuadExt(0)));
  // strictly inside again once pulled back by any positive amount
  QuadExt half = QuadExt(GoldenNum(make_rat(1, 2)));
  CHECK(chart_contains_sq(c12, half * phi_sigma, QuadExt(0)));
  CHECK(!chart_contains_sq(c12, -half, QuadExt(0)));
}

TEST_CASE("chart groups") {
  auto g12 = chart_group(chart(1, 2));
  // h-generator exponents (-1/phi, 1/phi)
  CHECK(g12.generators[0][0] == -GoldenNum::inv_phi());
  CHECK(g12.generators[0][1] == GoldenNum::inv_phi());
  // k-generator exponents (0, 1/phi)
  CHECK(g12.generators[1][0] == GoldenNum(0));
  CHECK(g12.generators[1][1] == GoldenNum::inv_phi());
  auto id = g12.element(0, 0);
  CHECK(id[0] == GoldenNum(0));
  CHECK(id[1] == GoldenNum(0));

  // 10^4 distinct elements: no repetition in a 100 x 100 block
  std::set<std::pair<std::string, std::string>> seen;
  for (int h = -50; h < 50; ++h)
    for (int k = -50; k < 50; ++k) {
      auto e = g12.element(h, k);
      CHECK(seen.insert({e[0].str(), e[1].str()}).second);
    }
  CHECK(seen.size() == 10000);

  // the swapped form of the (3,4) group
  auto g34 = chart_group(chart(3, 4));
  CHECK(g34.generators[0][0] == GoldenNum::inv_phi());
  CHECK(g34.generators[0][1] == -GoldenNum::inv_phi());
}

TEST_CASE("chart groups re-derived from the kernel parameterization") {
  // Independent route: an element of the kernel group fixes the slice iff its
  // coordinates X(s,t) = (-s + phi t, s, t, -t + phi s) are integral (in p, q)
  // at the complementary indices; the chart-group exponents are then the X
  // values at the chart's own indices, mod Z.
  auto xval = [](int label, const GoldenNum& s, const GoldenNum& t) {
    switch (label) {
      case 1: return GoldenNum::phi() * t - s;
      case 2: return s;
      case 3: return t;
      case 4: return GoldenNum::phi() * s - t;
    }
    return GoldenNum(0);
  };
  auto xcoef = [](int label) -> std::array<GoldenNum, 2> {
    switch (label) {
      case 1: return {GoldenNum(-1), GoldenNum::phi()};
      case 2: return {GoldenNum(1), GoldenNum(0)};
      case 3: return {GoldenNum(0), GoldenNum(1)};
      case 4: return {GoldenNum::phi(), GoldenNum(-1)};
    }
    return {GoldenNum(0), GoldenNum(0)};
  };
  auto integral_diff = [](const GoldenNum& a, const GoldenNum& b) {
    GoldenNum d = a - b;
    return d.b == 0 && d.a.get_den() == 1;
  };
  for (const auto& c : kite_charts()) {
    auto r1 = xcoef(c.comp[0]);
    auto r2 = xcoef(c.comp[1]);
    GoldenNum det = r1[0] * r2[1] - r1[1] * r2[0];
    REQUIRE(!det.is_zero());
    GoldenNum di = inverse(det);
    std::array<Golden2, 2> mech;  // exponent pairs for (p,q) = (1,0), (0,1)
    for (int g = 0; g < 2; ++g) {
      GoldenNum p(g == 0 ? 1 : 0), q(g == 0 ? 0 : 1);
      GoldenNum s = di * (r2[1] * p - r1[1] * q);
      GoldenNum t = di * (-(r2[0] * p) + r1[0] * q);
      // solved correctly: the complementary coordinates are (p, q)
      CHECK(xval(c.comp[0], s, t) == p);
      CHECK(xval(c.comp[1], s, t) == q);
      mech[g] = {xval(c.pair[0], s, t), xval(c.pair[1], s, t)};
    }
    // the mechanical generators agree with the stored ones mod Z^2, possibly
    // after swapping the two generators
    auto matches = [&](const Golden2& a, const Golden2& b) {
      return integral_diff(a[0], b[0]) && integral_diff(a[1], b[1]);
    };
    bool direct = matches(mech[0], c.gamma_generators[0]) &&
                  matches(mech[1], c.gamma_generators[1]);
    bool swapped = matches(mech[0], c.gamma_generators[1]) &&
                   matches(mech[1], c.gamma_generators[0]);
    bool same_group = direct || swapped;
    CHECK_MESSAGE(same_group, "chart " << c.pair[0] << c.pair[1]);
  }
}

TEST_CASE("covering action") {
  const auto& c12 = chart(1, 2);
  Point4 p{0.3, 0.12, 0.4, -0.7};
  Point4 q = covering_action(c12, {1, 0, 0, 0}, p);
  CHECK(q[1] == doctest::Approx(p[1] + 1.0));
  CHECK(q[3] == doctest::Approx(p[3]));
  CHECK(q[0] == p[0]);
  Point4 r = covering_action(c12, {0, 0, 0, 0}, p);
  for (int i = 0; i < 4; ++i) CHECK(r[i] == p[i]);
  // h shifts theta_1 by -1/phi and theta_2 by +1/phi
  Point4 s = covering_action(c12, {0, 0, 1, 0}, p);
  CHECK(s[1] == doctest::Approx(p[1] - 1 / kPhi));
  CHECK(s[3] == doctest::Approx(p[3] + 1 / kPhi));
}

TEST_CASE("covering actions are free (exact fixed-point solve)") {
  for (const auto& c : kite_charts()) CHECK(qk::atlas::action_kernel(c.action).empty());
  // rational corruption: 1/2 in place of 1/phi produces fixed directions
  auto action = chart(1, 2).action;
  action[0][2] = GoldenNum(make_rat(-1, 2));
  action[1][2] = GoldenNum(make_rat(1, 2));
  action[1][3] = GoldenNum(make_rat(1, 2));
  CHECK(!qk::atlas::action_kernel(action).empty());
}

TEST_CASE("transition lift against the closed form") {
  auto lift = transition_lift(chart(1, 2), chart(3, 4));
  for (int i = 0; i < 200; ++i) {
    SampleRng rng(34, 0, i);
    Point4 p = sample_domain_point(chart(1, 2), rng, 0.05);
    Point4 got = lift.apply(p);
    Point4 want = reference_lift_12_34(p);
    for (int c = 0; c < 4; ++c) CHECK(std::fabs(got[c] - want[c]) <= 1e-14);
  }
  CHECK(lift.F == kPaperF);
  CHECK(apply_matrix(lift.F, {1, 0, 0, 0}) == Z4{0, 0, -1, 0});
  CHECK(det4(lift.F) == -1);
}

TEST_CASE("every transition matrix is unimodular") {
  for (const auto& a : kite_charts())
    for (const auto& b : kite_charts()) {
      auto lift = transition_lift(a, b);
      auto d = det4(lift.F);
      CHECK((d == 1 || d == -1));
    }
}

TEST_CASE("round trip of the two detailed charts is the identity") {
  auto fwd = transition_lift(chart(1, 2), chart(3, 4));
  auto bwd = transition_lift(chart(3, 4), chart(1, 2));
  for (int i = 0; i < 100; ++i) {
    SampleRng rng(35, 0, i);
    Point4 p = sample_domain_point(chart(1, 2), rng, 0.05);
    Point4 back = bwd.apply(fwd.apply(p));
    for (int c = 0; c < 4; ++c) CHECK(std::fabs(back[c] - p[c]) <= 1e-10);
  }
}

TEST_CASE("identity transition of a chart with itself") {
  auto self = transition_lift(chart(2, 3), chart(2, 3));
  Mat4I identity{1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};
  CHECK(self.F == identity);
  SampleRng rng(36, 0, 0);
  Point4 p = sample_domain_point(chart(2, 3), rng, 0.05);
  Point4 q = self.apply(p);
  for (int c = 0; c < 4; ++c) CHECK(q[c] == doctest::Approx(p[c]).epsilon(1e-15));
}

TEST_CASE("verify_transition residuals and the corrupted-F control") {
  auto lift = transition_lift(chart(1, 2), chart(3, 4));
  Report rep = verify_transition(lift, 300, 1e-10, 2026);
  CHECK(rep.pass());
  CHECK(rep.find("equivariance at sample points")->max_residual <= 1e-10);
  CHECK(rep.find("symplectic pullback")->max_residual <= 1e-9);

  // swapping two rows of F breaks equivariance but not the symplectic check
  auto bad = lift;
  for (int c = 0; c < 4; ++c) std::swap(bad.F[c], bad.F[4 + c]);
  Report brep = verify_transition(bad, 100, 1e-10, 2026);
  CHECK(!brep.pass());
  CHECK(!brep.find("equivariance at generators (exact)")->pass);
  CHECK(!brep.find("equivariance at sample points")->pass);
  CHECK(brep.find("symplectic pullback")->pass);
}

TEST_CASE("obstruction witness") {
  Report rep = obstruction_witness();
  CHECK(rep.pass());
  auto lift = transition_lift(chart(1, 2), chart(3, 4));
  CHECK(apply_matrix(lift.F, {0, 0, 0, 0}) == Z4{0, 0, 0, 0});
  CHECK(apply_matrix(lift.F, {0, 1, 0, 0}) == Z4{0, -1, 0, -1});
  // containment itself fails for the kite's F, passes for a deck-preserving one
  CHECK(!obstruction_check(lift.F, 100, 7).pass());
  Mat4I control{1, 0, 0, 0, 1, 1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 1};
  CHECK(obstruction_check(control, 100, 7).pass());
}

TEST_CASE("symmetry equivalence of all ten kites") {
  for (int sign : {+1, -1})
    for (int k = 0; k < 5; ++k) {
      Report rep = symmetry_equivalence(k, sign);
      CHECK_MESSAGE(rep.pass(), "k=" << k << " sign=" << sign);
    }
}

TEST_CASE("polytope reconstruction from slices") {
  Report rep = verify_polytope_reconstruction(150, 2026);
  CHECK(rep.pass());
  CHECK(rep.find("sampled moment image lies in the kite")->max_residual <= 1e-12);
}
