#pragma once
// Symplectic reduction data for the Penrose kite.
//
// The kite Delta_k^+- sits in (R^2)* as the intersection of four half-planes
// <mu, X_j> >= lambda_j with inward normals X_j in the pentagonal quasilattice
// Q and offsets lambda = (-s/2, 0, 0, -s/2).  Reduction of C^4 by the kernel
// group N of e_j -> X_j produces a four-dimensional quasifold described here
// through its four charts, one per kite vertex:
//
//   chart (i,j): coordinates (z_i, z_j); the other two moduli are determined
//   on the zero level set, giving a slice transversal to the N-orbits.  The
//   chart quotient group Gamma_ij acts through exponents in (1/phi)Z + Z, and
//   its universal-cover picture is an affine Z^4 action on (rho, theta)
//   coordinates whose deck subgroup is {(m, n, 0, 0)}.
//
// Transitions between charts are closed-form lifts; each carries the integer
// matrix F making it equivariant.  F does not preserve the deck subgroups,
// which is the computational core of the no-global-quotient obstruction.
//
// Exact data (normals, offsets, kernel bases, chart coefficients, F) lives in
// Q(phi)[s]; only moment-map evaluations and sampled residuals use doubles.

#include <array>
#include <complex>
#include <cstdint>
#include <utility>

#include "qk/parallel.hpp"
#include "qk/quasilattice.hpp"
#include "qk/report.hpp"
#include "qk/rng.hpp"

namespace qk::delzant {

using exact::GoldenNum;
using exact::QuadExt;
using lattice::PlanarPoint;
using lattice::QVector;
using lattice::RVector;

using Golden2 = std::array<GoldenNum, 2>;
using Golden4 = std::array<GoldenNum, 4>;
using Mat2G = std::array<Golden2, 2>;
using Basis2x4 = std::array<Golden4, 2>;
using Z4 = std::array<std::int64_t, 4>;
using Mat4I = std::array<std::int64_t, 16>;  // row-major
using Point4 = std::array<double, 4>;        // rho_1, theta_1, rho_2, theta_2
using Mat4D = std::array<std::array<double, 4>, 4>;

struct Polytope2D {
  struct Facet {
    QVector normal;
    QuadExt offset;
  };
  std::array<Facet, 4> facets;          // facet labels 1..4 at indices 0..3
  std::array<PlanarPoint, 4> vertices;  // E, B, A, G
  static constexpr std::array<const char*, 4> vertex_names{"E", "B", "A", "G"};

  // vertex index sitting on facets (j, j+1 cyclically): (1,2)->B, (2,3)->E,
  // (3,4)->G, (4,1)->A
  static int vertex_of_pair(int i, int j);
};

struct DelzantData {
  int k = 0;
  int sign = +1;
  std::array<QVector, 4> X;
  std::array<QuadExt, 4> lambda;
  Basis2x4 kernel_basis;  // the (1,2)-adapted basis
  QuadExt sigma;          // s / (2 phi)
};

// Exact polytope and reduction data for Delta_k^{sign}; validates simplicity
// and that the X_j generate Q.
std::pair<Polytope2D, DelzantData> kite_polytope(int k, int sign);

struct KernelBases {
  Basis2x4 b12, b34;
  Mat2G change_of_basis;  // b34 = M * b12
  GoldenNum det;
};

// Both kernel bases, checked to map to zero under e_j -> X_j, with the exact
// change of basis between them.
KernelBases kernel_basis(const DelzantData& data);

using Complex4 = std::array<std::complex<double>, 4>;

// J_j(z) = |z_j|^2 + lambda_j
std::array<double, 4> ambient_moment_map(const Complex4& z,
                                         const std::array<QuadExt, 4>& lambda);

struct Chart {
  std::array<int, 2> pair;  // facet labels of the chart coordinates (1-based)
  std::array<int, 2> comp;  // the complementary labels, slice order

  struct Affine2 {  // c0 + c1 * rho_1^2 + c2 * rho_2^2
    QuadExt c0;
    GoldenNum c1, c2;
    double eval(double r1sq, double r2sq) const;
  };
  std::array<Affine2, 2> radicand;  // |z_comp[r]|^2 over the chart
  Basis2x4 adapted_basis;           // kernel basis with identity block on comp

  // Z^4 covering action: (m,n,h,k) -> theta translations, one golden row per
  // chart coordinate.  Deck transformations are the (m,n,0,0) sublattice.
  std::array<Golden4, 2> action;
  // exponent pairs of the quotient-group generators h and k
  std::array<Golden2, 2> gamma_generators;
};

const std::array<Chart, 4>& kite_charts();
const Chart& chart(int i, int j);

// The slice through Psi^{-1}(0): fills the complementary moduli from the
// radicands.  Throws std::domain_error if (w1, w2) leaves the chart domain.
Complex4 chart_slice(const Chart& c, std::complex<double> w1, std::complex<double> w2);

// exact |z_j|^2 of the slice at w = 0 (the vertex point)
std::array<QuadExt, 4> chart_slice_zero_sq(const Chart& c);

// exact domain membership for exactly known moduli: both radicands strictly
// positive under quad_sign (boundary points are outside the open domain)
bool chart_contains_sq(const Chart& c, const QuadExt& w1sq, const QuadExt& w2sq);

enum class BasisTag { B12, B34 };
std::array<double, 2> reduced_moment_map(const Complex4& z, BasisTag tag);
std::array<double, 2> reduced_moment_map(const Complex4& z, const Chart& c);

struct ChartGroup {
  std::array<int, 2> pair;
  std::array<Golden2, 2> generators;  // exponent pairs of the h- and k-generator
  Golden2 element(std::int64_t h, std::int64_t k) const;
};
ChartGroup chart_group(const Chart& c);

// exact theta translations of a group element
Golden2 action_translation(const Chart& c, const Z4& g);
Point4 covering_action(const Chart& c, const Z4& g, const Point4& p);

struct TransitionLift {
  Chart source, target;
  Mat2G theta_map;               // output thetas = L * (theta_1, theta_2)
  std::array<int, 2> rho_from;   // source slot passed through, or -1
  std::array<int, 2> rad_slot;   // source radicand slot when rho_from == -1
  Mat4I F{};                     // equivariance isomorphism on Z^4

  Point4 apply(const Point4& p) const;
  Mat4D jacobian(const Point4& p) const;
  bool in_source_domain(const Point4& p, double margin = 0) const;
  bool in_target_domain(const Point4& q, double margin = 0) const;
};

TransitionLift transition_lift(const Chart& src, const Chart& dst);

std::int64_t det4(const Mat4I& m);
Z4 apply_matrix(const Mat4I& m, const Z4& g);

// Solves for the target-group element with the given exact theta translation;
// ok == false when the translation is not in the group's translation lattice.
struct ElementSolve {
  bool ok = false;
  Z4 g{};
};
ElementSolve solve_element(const Chart& target, const Golden2& translation);

// Draws a point of the chart's covering domain, radicands kept above
// margin_frac times their vertex values.
Point4 sample_domain_point(const Chart& c, SampleRng& rng, double margin_frac);

struct CommutationSample {
  bool ok = false;
  double residual = 0;
};
// Projects both routes of the chart-change diagram to the quotient and
// matches them by an exactly solved group element.
CommutationSample check_commutation_at(const TransitionLift& t, const Point4& p,
                                       double tol);

// equivariance (exact at generators, sampled numerically), symplectic
// pullback via closed-form Jacobians, quotient commutation, domain mapping
Report verify_transition(const TransitionLift& t, int samples, double tol,
                         std::uint64_t seed, Exec policy = Exec::Parallel);

// deck-subgroup containment of an integer matrix F
Report obstruction_check(const Mat4I& F, int random_samples, std::uint64_t seed);
// the (1,2)->(3,4) instance: no nontrivial deck element stays in the deck
Report obstruction_witness();

// rotation/reflection carrying Delta_0^+ onto Delta_k^{sign}: star map,
// normals, vertices, reduction-data equality, translation invariance
Report symmetry_equivalence(int k, int sign, std::uint64_t seed = 7);

// sampled J-image containment in the kite plus exact vertex attainment
Report verify_polytope_reconstruction(int samples, std::uint64_t seed);

}  // namespace qk::delzant
