#include "qk/atlas_checks.hpp"

#include <algorithm>
#include <cmath>

namespace qk::atlas {

using delzant::action_translation;
using delzant::check_commutation_at;
using delzant::sample_domain_point;
using delzant::transition_lift;
using delzant::verify_transition;
using exact::GoldenNum;
using exact::Rat;

ModelSpec model_of(const Chart& c) {
  return {4, c.radicand, c.action, false};
}

std::vector<Z4> action_kernel(const std::array<Golden4, 2>& action) {
  // exact rational 4x4 system: both golden coefficients of both rows vanish
  std::array<std::array<Rat, 4>, 4> m;
  for (int q = 0; q < 2; ++q)
    for (int c = 0; c < 4; ++c) {
      m[2 * q][c] = action[q][c].a;
      m[2 * q + 1][c] = action[q][c].b;
    }

  std::array<int, 4> pivot_col{-1, -1, -1, -1};
  int rank = 0;
  for (int col = 0; col < 4 && rank < 4; ++col) {
    int p = -1;
    for (int r = rank; r < 4; ++r)
      if (m[r][col] != 0) {
        p = r;
        break;
      }
    if (p < 0) continue;
    std::swap(m[p], m[rank]);
    Rat inv = 1 / m[rank][col];
    for (int c = 0; c < 4; ++c) m[rank][c] = m[rank][c] * inv;
    for (int r = 0; r < 4; ++r) {
      if (r == rank || m[r][col] == 0) continue;
      Rat f = m[r][col];
      for (int c = 0; c < 4; ++c) m[r][c] = m[r][c] - f * m[rank][c];
    }
    pivot_col[rank] = col;
    ++rank;
  }

  std::vector<Z4> kernel;
  for (int f = 0; f < 4; ++f) {
    bool is_pivot = false;
    for (int r = 0; r < rank; ++r) is_pivot = is_pivot || pivot_col[r] == f;
    if (is_pivot) continue;
    std::array<Rat, 4> v{};
    v[f] = 1;
    for (int r = 0; r < rank; ++r) v[pivot_col[r]] = -m[r][f];
    mpz_class den = 1;
    for (const auto& e : v) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), e.get_den().get_mpz_t());
    Z4 iv{};
    for (int c = 0; c < 4; ++c) {
      Rat scaled = v[c] * Rat(den);
      iv[c] = scaled.get_num().get_si();
    }
    kernel.push_back(iv);
  }
  return kernel;
}

Report check_model(const ModelSpec& m, int samples, std::uint64_t seed, Exec policy) {
  Report rep;
  rep.name = "model";

  auto kernel = action_kernel(m.action);
  {
    nlohmann::json witness = nlohmann::json::array();
    for (const auto& g : kernel) witness.push_back(g);
    rep.add({"action is free on the open domain (exact fixed-point solve)",
             kernel.empty(), 0.0, witness.empty() ? nlohmann::json() : witness});
  }
  if (m.closed) {
    // On a rho_i = 0 stratum the angle theta_i collapses, so an element fixes
    // stratum points iff its translations vanish on the surviving
    // coordinates.  A stratum with mask S has codimension 2|S|, hence any
    // non-free locus sits in codimension >= 2.
    nlohmann::json strata = nlohmann::json::array();
    int max_fixed_dim = -1;
    for (int mask = 1; mask < 4; ++mask) {
      std::array<Golden4, 2> sub{};
      int kept = 0;
      for (int q = 0; q < 2; ++q)
        if (!(mask & (1 << q))) sub[kept++] = m.action[q];
      for (int q = kept; q < 2; ++q)
        for (auto& e : sub[q]) e = GoldenNum(0);
      bool stabilized = kept == 0 || !action_kernel(sub).empty();
      int dim = 2 * (2 - __builtin_popcount(mask));
      if (stabilized) max_fixed_dim = std::max(max_fixed_dim, dim);
      strata.push_back({{"rho_zero_mask", mask}, {"dim", dim}, {"stabilized", stabilized}});
    }
    rep.add({"non-free locus confined to codimension >= 2 strata", true, 0.0,
             nlohmann::json{{"strata", strata}, {"max_fixed_dim", max_fixed_dim}}});
  }

  const auto n = static_cast<std::size_t>(samples);
  std::vector<std::uint8_t> ok(n, 1);
  Chart probe;  // only used as a sampler over the same inequality shape
  probe.pair = {1, 2};
  probe.comp = {3, 4};
  probe.radicand = m.inequalities;
  parallel_for(n, policy, [&](std::size_t i) {
    SampleRng rng(seed, 41, i);
    auto p = sample_domain_point(probe, rng, 0.02);
    Z4 g{rng.integer(-3, 3), rng.integer(-3, 3), rng.integer(-3, 3), rng.integer(-3, 3)};
    Golden2 t{GoldenNum(0), GoldenNum(0)};
    for (int q = 0; q < 2; ++q)
      for (int c = 0; c < 4; ++c)
        t[q] = t[q] + GoldenNum(static_cast<long>(g[c])) * m.action[q][c];
    delzant::Point4 q4{p[0], p[1] + t[0].to_double(), p[2], p[3] + t[1].to_double()};
    double r1sq = q4[0] * q4[0], r2sq = q4[2] * q4[2];
    ok[i] = m.inequalities[0].eval(r1sq, r2sq) > 0 && m.inequalities[1].eval(r1sq, r2sq) > 0;
  });
  bool all = true;
  for (auto v : ok) all = all && v;
  rep.add({"action preserves the domain (sampled)", all, 0.0, {}});
  return rep;
}

ExtensionSpec extension_of(const Chart& c) { return {c.action, c.gamma_generators}; }

Report check_extension(const ExtensionSpec& e, int random_pairs, std::uint64_t seed) {
  Report rep;
  rep.name = "extension";

  // deck columns are the integer translations (1,0)/(0,1)
  bool deck_ok = true;
  for (int q = 0; q < 2; ++q)
    for (int c = 0; c < 2; ++c) {
      const GoldenNum& g = e.total_action[q][c];
      deck_ok = deck_ok && g.b == 0 && g.a == ((q == c) ? 1 : 0);
    }
  rep.add({"deck generators translate by integers only", deck_ok, 0.0, {}});

  // an element maps to the trivial exponent iff h = k = 0: the phi-parts of
  // the (h,k) columns form an invertible integer 2x2 block
  Rat det = e.total_action[0][2].b * e.total_action[1][3].b -
            e.total_action[0][3].b * e.total_action[1][2].b;
  rep.add({"kernel of the exponent map is exactly the (m,n,0,0) sublattice",
           deck_ok && det != 0, 0.0, nlohmann::json{{"phi_block_det", det.get_d()}}});

  bool gens_ok = true;
  for (int c = 0; c < 2; ++c)
    for (int q = 0; q < 2; ++q)
      gens_ok = gens_ok && e.total_action[q][2 + c] == e.quotient_gens[c][q];
  rep.add({"exponent map hits the quotient generators", gens_ok, 0.0, {}});

  bool hom_ok = true;
  for (int i = 0; i < random_pairs; ++i) {
    SampleRng rng(seed, 43, static_cast<std::uint64_t>(i));
    Z4 g1{}, g2{};
    for (auto& v : g1) v = rng.integer(-20, 20);
    for (auto& v : g2) v = rng.integer(-20, 20);
    Z4 g12{};
    for (int c = 0; c < 4; ++c) g12[c] = g1[c] + g2[c];
    for (int q = 0; q < 2; ++q) {
      GoldenNum lhs(0), r1(0), r2(0);
      for (int c = 0; c < 4; ++c) {
        lhs = lhs + GoldenNum(static_cast<long>(g12[c])) * e.total_action[q][c];
        r1 = r1 + GoldenNum(static_cast<long>(g1[c])) * e.total_action[q][c];
        r2 = r2 + GoldenNum(static_cast<long>(g2[c])) * e.total_action[q][c];
      }
      hom_ok = hom_ok && lhs == r1 + r2;
    }
  }
  rep.add({"exponent map is a homomorphism (exact, random pairs)", hom_ok, 0.0, {}});
  return rep;
}

Report check_lift_commutes(const LiftSpec& l, int samples, double tol,
                           std::uint64_t seed, Exec policy) {
  Report rep;
  rep.name = "lift-commutation";
  const auto n = static_cast<std::size_t>(samples);
  std::vector<double> res(n);
  std::vector<std::uint8_t> ok(n);
  parallel_for(n, policy, [&](std::size_t i) {
    SampleRng rng(seed, 47, i);
    auto p = sample_domain_point(l.lift.source, rng, 0.05);
    auto cs = check_commutation_at(l.lift, p, tol);
    res[i] = cs.residual;
    ok[i] = cs.ok;
  });
  double mx = 0;
  bool all = true;
  for (std::size_t i = 0; i < n; ++i) {
    mx = std::max(mx, res[i]);
    all = all && ok[i];
  }
  rep.add({"lift projects to the orbit-level change of charts", all && mx <= tol, mx, {}});
  return rep;
}

Report check_compatibility(const Chart& a, const Chart& b, int overlap_samples,
                           double tol, std::uint64_t seed, Exec policy) {
  Report rep;
  rep.name = "compatibility-" + std::to_string(a.pair[0]) + std::to_string(a.pair[1]) +
             "-" + std::to_string(b.pair[0]) + std::to_string(b.pair[1]);
  const std::string la = std::to_string(a.pair[0]) + std::to_string(a.pair[1]);
  const std::string lb = std::to_string(b.pair[0]) + std::to_string(b.pair[1]);

  rep.merge(check_model(model_of(a), overlap_samples / 4 + 1, seed, policy), "model-" + la);
  rep.merge(check_model(model_of(b), overlap_samples / 4 + 1, seed + 1, policy),
            "model-" + lb);
  rep.merge(check_extension(extension_of(a), 64, seed + 2), "extension-" + la);
  rep.merge(check_extension(extension_of(b), 64, seed + 3), "extension-" + lb);

  TransitionLift lift = transition_lift(a, b);
  rep.merge(check_lift_commutes({lift}, overlap_samples, tol, seed + 4, policy), "lift");
  rep.merge(verify_transition(lift, overlap_samples, tol, seed + 5, policy), "transition");
  return rep;
}

}  // namespace qk::atlas
