#pragma once
// Desk-scale verification of the quasifold-model formalism on the kite's
// charts: model validity (domain-preserving action, free on the open part,
// analyzed by exact fixed-point solves), the extension
// 1 -> Z^2 -> Z^4 -> Gamma -> 1 of each chart group by its deck lattice,
// lift commutation against the orbit-level change of charts, and the bundled
// pairwise compatibility check.

#include <vector>

#include "qk/delzant.hpp"

namespace qk::atlas {

using delzant::Chart;
using delzant::Golden2;
using delzant::Golden4;
using delzant::TransitionLift;
using delzant::Z4;

struct ModelSpec {
  int dim = 4;
  // strict inequalities c0 + c1 rho1^2 + c2 rho2^2 > 0 over the open
  // (rho in R^+, theta in R)^2 domain
  std::array<Chart::Affine2, 2> inequalities;
  std::array<Golden4, 2> action;  // Z^4 -> theta translations (golden rows)
  bool closed = false;            // admit rho = 0 strata
};

ModelSpec model_of(const Chart& c);

// Integer kernel of the exact translation map Z^4 -> R^2; empty iff the
// action is free on the open domain.
std::vector<Z4> action_kernel(const std::array<Golden4, 2>& action);

Report check_model(const ModelSpec& m, int samples, std::uint64_t seed,
                   Exec policy = Exec::Parallel);

struct ExtensionSpec {
  std::array<Golden4, 2> total_action;   // the Z^4 action upstairs
  std::array<Golden2, 2> quotient_gens;  // expected Gamma generator exponents
};

ExtensionSpec extension_of(const Chart& c);

Report check_extension(const ExtensionSpec& e, int random_pairs, std::uint64_t seed);

struct LiftSpec {
  TransitionLift lift;
};

Report check_lift_commutes(const LiftSpec& l, int samples, double tol,
                           std::uint64_t seed, Exec policy = Exec::Parallel);

// model + extension checks on both charts plus the connecting lift's
// commutation and transition verification; passes iff every part passes
Report check_compatibility(const Chart& a, const Chart& b, int overlap_samples,
                           double tol, std::uint64_t seed,
                           Exec policy = Exec::Parallel);

}  // namespace qk::atlas
