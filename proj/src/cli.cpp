#include "qk/cli.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qk/atlas_checks.hpp"
#include "qk/delzant.hpp"
#include "qk/svg_render.hpp"
#include "qk/tiling.hpp"

namespace qk::cli {

namespace {

using nlohmann::json;

json planar_json(const lattice::PlanarPoint& p) {
  return {{"exact", {p.x.str(), p.y.str()}}, {"float", {p.fx(), p.fy()}}};
}

json patch_summary(const tiling::Patch& p) {
  std::size_t kites = 0, darts = 0;
  for (const auto& t : p.tiles) (tiling::is_kite(t.kind) ? kites : darts)++;
  return {{"provenance", p.provenance},
          {"tiles", p.tiles.size()},
          {"kite_halves", kites},
          {"dart_halves", darts}};
}

json verification_json(const tiling::VerificationReport& r, bool full_vertices) {
  json j;
  j["pass"] = r.ok();
  j["tiles"] = r.tile_count;
  j["kite_halves"] = r.kite_halves;
  j["dart_halves"] = r.dart_halves;
  j["vertices"] = r.vertex_count;
  j["interior_vertices"] = r.interior_vertices;
  j["boundary_vertices"] = r.boundary_vertices;
  j["edges"] = r.edge_count;
  j["shared_edges"] = r.shared_edges;
  j["boundary_edges"] = r.boundary_edges;
  j["full_kites"] = r.full_kites;
  j["full_darts"] = r.full_darts;
  j["edge_classes"] = {{"long", r.edge_class_histogram[0]},
                       {"short", r.edge_class_histogram[1]}};
  j["violations"] = json::array();
  for (const auto& v : r.violations)
    j["violations"].push_back({{"what", v.what}, {"tiles", v.tiles}, {"detail", v.detail}});
  if (full_vertices) {
    j["vertex_coordinates"] = json::array();
    for (const auto& v : r.vertices) j["vertex_coordinates"].push_back(v.n);
  }
  return j;
}

void emit(const json& j, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << j.dump(2) << "\n";
  } else {
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot write " + out_path);
    f << j.dump(2) << "\n";
    out << out_path << "\n";
  }
}

tiling::Patch load_patch(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  return tiling::load_jsonl(f);
}

std::array<int, 2> parse_chart_label(const std::string& s) {
  if (s.size() == 2 && s[0] >= '1' && s[0] <= '4' && s[1] >= '1' && s[1] <= '4')
    return {s[0] - '0', s[1] - '0'};
  throw CLI::ValidationError("--pair", "chart labels are 12, 23, 34, 41");
}

json delzant_report_json(int k, int sign) {
  const auto [poly, data] = delzant::kite_polytope(k, sign);
  json j;
  j["kite"] = {{"k", data.k}, {"sign", sign > 0 ? "+" : "-"}};
  j["sigma"] = data.sigma.str();

  json facets = json::array();
  for (int f = 0; f < 4; ++f)
    facets.push_back({{"label", f + 1},
                      {"normal", data.X[f].n},
                      {"offset", data.lambda[f].str()},
                      {"offset_float", exact::to_float(data.lambda[f])}});
  j["facets"] = facets;

  json verts;
  for (int v = 0; v < 4; ++v)
    verts[delzant::Polytope2D::vertex_names[v]] = planar_json(poly.vertices[v]);
  j["vertices"] = verts;

  auto kb = delzant::kernel_basis(data);
  auto basis_json = [](const delzant::Basis2x4& b) {
    json rows = json::array();
    for (const auto& row : b) {
      json r = json::array();
      for (const auto& g : row) r.push_back(g.str());
      rows.push_back(r);
    }
    return rows;
  };
  j["kernel_bases"] = {{"b12", basis_json(kb.b12)},
                       {"b34", basis_json(kb.b34)},
                       {"change_of_basis",
                        {{kb.change_of_basis[0][0].str(), kb.change_of_basis[0][1].str()},
                         {kb.change_of_basis[1][0].str(), kb.change_of_basis[1][1].str()}}},
                       {"det", kb.det.str()}};

  json charts = json::array();
  for (const auto& c : delzant::kite_charts()) {
    json cj;
    cj["pair"] = c.pair;
    cj["complement"] = c.comp;
    cj["vertex"] =
        delzant::Polytope2D::vertex_names[delzant::Polytope2D::vertex_of_pair(c.pair[0],
                                                                              c.pair[1])];
    json doms = json::array();
    for (const auto& r : c.radicand)
      doms.push_back({{"c0", r.c0.str()}, {"c1", r.c1.str()}, {"c2", r.c2.str()}});
    cj["domain_radicands"] = doms;
    json basis = json::array();
    for (const auto& row : c.adapted_basis) {
      json rj = json::array();
      for (const auto& g : row) rj.push_back(g.str());
      basis.push_back(rj);
    }
    cj["adapted_basis"] = basis;
    json act = json::array();
    for (const auto& row : c.action) {
      json rj = json::array();
      for (const auto& g : row) rj.push_back(g.str());
      act.push_back(rj);
    }
    cj["covering_action"] = act;
    cj["gamma_generators"] = {{c.gamma_generators[0][0].str(), c.gamma_generators[0][1].str()},
                              {c.gamma_generators[1][0].str(), c.gamma_generators[1][1].str()}};
    charts.push_back(cj);
  }
  j["charts"] = charts;
  return j;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Penrose kite-and-dart patches over the pentagonal quasilattice and "
               "the kite's symplectic reduction atlas"};
  app.require_subcommand(1);

  std::function<int()> action;

  const std::map<std::string, Exec> policy_map{{"serial", Exec::Serial},
                                               {"parallel", Exec::Parallel}};

  // ---- tile ----
  auto* tile = app.add_subcommand("tile", "generate, verify and render patches");
  tile->require_subcommand(1);

  {
    auto* gen = tile->add_subcommand("generate", "seed and inflate a patch");
    auto seed = std::make_shared<std::string>("delta-plus-0");
    auto steps = std::make_shared<int>(0);
    auto out_path = std::make_shared<std::string>();
    auto policy = std::make_shared<Exec>(Exec::Parallel);
    gen->add_option("--seed", *seed, "seed name (see `tile generate --list-seeds`)");
    gen->add_option("--steps", *steps, "inflation steps")->check(CLI::Range(0, 40));
    gen->add_option("--out", *out_path, "patch file (JSON lines)");
    gen->add_option("--policy", *policy, "serial|parallel")
        ->transform(CLI::CheckedTransformer(policy_map, CLI::ignore_case));
    auto list_seeds = std::make_shared<bool>(false);
    gen->add_flag("--list-seeds", *list_seeds, "print the seed names and exit");
    gen->callback([&, seed, steps, out_path, policy, list_seeds] {
      action = [&, seed, steps, out_path, policy, list_seeds]() -> int {
        if (*list_seeds) {
          for (const auto& n : tiling::seed_names()) out << n << "\n";
          return 0;
        }
        if (out_path->empty()) throw CLI::ValidationError("--out", "an output path is required");
        tiling::Patch p = tiling::seed_patch(*seed);
        if (*steps > 0) p = tiling::inflate(p, *steps, *policy);
        std::ofstream f(*out_path);
        if (!f) throw std::runtime_error("cannot write " + *out_path);
        tiling::save_jsonl(p, f);
        out << patch_summary(p).dump(2) << "\n";
        return 0;
      };
    });
  }

  {
    auto* ver = tile->add_subcommand("verify", "check a patch file");
    auto in_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    auto full = std::make_shared<bool>(false);
    auto policy = std::make_shared<Exec>(Exec::Parallel);
    ver->add_option("--in", *in_path, "patch file")->required()->check(CLI::ExistingFile);
    ver->add_option("--out", *out_path, "also write the report here");
    ver->add_flag("--full-vertices", *full, "include every vertex tuple in the report");
    ver->add_option("--policy", *policy, "serial|parallel")
        ->transform(CLI::CheckedTransformer(policy_map, CLI::ignore_case));
    ver->callback([&, in_path, out_path, full, policy] {
      action = [&, in_path, out_path, full, policy]() -> int {
        auto rep = tiling::verify_patch(load_patch(*in_path), *policy);
        json j = verification_json(rep, *full);
        if (!out_path->empty()) {
          std::ofstream f(*out_path);
          if (!f) throw std::runtime_error("cannot write " + *out_path);
          f << j.dump(2) << "\n";
        }
        out << j.dump(2) << "\n";
        return rep.ok() ? 0 : 1;
      };
    });
  }

  {
    auto* ren = tile->add_subcommand("render", "render a patch to SVG");
    auto in_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    auto overlay = std::make_shared<bool>(false);
    auto scale = std::make_shared<double>(120.0);
    ren->add_option("--in", *in_path, "patch file")->required()->check(CLI::ExistingFile);
    ren->add_option("--out", *out_path, "SVG file")->required();
    ren->add_flag("--overlay-star", *overlay, "draw the dual star at the origin");
    ren->add_option("--scale", *scale, "pixels per unit edge")->check(CLI::PositiveNumber);
    ren->callback([&, in_path, out_path, overlay, scale] {
      action = [&, in_path, out_path, overlay, scale]() -> int {
        tiling::SvgOptions opt;
        opt.overlay_star = *overlay;
        opt.scale = *scale;
        std::string svg = tiling::render_svg(load_patch(*in_path), opt);
        std::ofstream f(*out_path);
        if (!f) throw std::runtime_error("cannot write " + *out_path);
        f << svg;
        out << *out_path << "\n";
        return 0;
      };
    });
  }

  // ---- delzant ----
  auto* dz = app.add_subcommand("delzant", "reduction data and chart verification");
  dz->require_subcommand(1);

  {
    auto* rp = dz->add_subcommand("report", "polytope, kernel and chart data as JSON");
    auto k = std::make_shared<int>(0);
    auto sign = std::make_shared<std::string>("+");
    auto out_path = std::make_shared<std::string>();
    rp->add_option("--kite", *k, "star index k of Delta_k")->check(CLI::Range(0, 4));
    rp->add_option("--sign", *sign, "+ or - (also plus|minus)");
    rp->add_option("--out", *out_path, "write the JSON here instead of stdout");
    rp->callback([&, k, sign, out_path] {
      action = [&, k, sign, out_path]() -> int {
        int s;
        if (*sign == "+" || *sign == "plus") s = +1;
        else if (*sign == "-" || *sign == "minus") s = -1;
        else throw CLI::ValidationError("--sign", "expected +, -, plus or minus");
        emit(delzant_report_json(*k, s), *out_path, out);
        return 0;
      };
    });
  }

  {
    auto* dv = dz->add_subcommand("verify",
                                  "transition equivariance, symplectic pullback, "
                                  "quotient commutation and the obstruction");
    auto pair = std::make_shared<std::string>("12-34");
    auto samples = std::make_shared<int>(1000);
    auto tol = std::make_shared<double>(1e-9);
    auto rng_seed = std::make_shared<std::uint64_t>(2026);
    auto policy = std::make_shared<Exec>(Exec::Parallel);
    dv->add_option("--pair", *pair, "source-target chart labels, e.g. 12-34, or 'all'");
    dv->add_option("--samples", *samples, "sample points")->check(CLI::PositiveNumber);
    dv->add_option("--tol", *tol, "residual tolerance")->check(CLI::PositiveNumber);
    dv->add_option("--rng-seed", *rng_seed, "sampling seed");
    dv->add_option("--policy", *policy, "serial|parallel")
        ->transform(CLI::CheckedTransformer(policy_map, CLI::ignore_case));
    dv->callback([&, pair, samples, tol, rng_seed, policy] {
      action = [&, pair, samples, tol, rng_seed, policy]() -> int {
        std::vector<std::pair<std::array<int, 2>, std::array<int, 2>>> pairs;
        if (*pair == "all") {
          for (const auto& a : delzant::kite_charts())
            for (const auto& b : delzant::kite_charts())
              if (a.pair != b.pair) pairs.push_back({a.pair, b.pair});
        } else {
          auto dash = pair->find('-');
          if (dash == std::string::npos)
            throw CLI::ValidationError("--pair", "expected e.g. 12-34");
          pairs.push_back({parse_chart_label(pair->substr(0, dash)),
                           parse_chart_label(pair->substr(dash + 1))});
        }
        json reports = json::array();
        bool pass = true;
        for (const auto& [pa, pb] : pairs) {
          auto lift = delzant::transition_lift(delzant::chart(pa[0], pa[1]),
                                               delzant::chart(pb[0], pb[1]));
          Report r = delzant::verify_transition(lift, *samples, *tol, *rng_seed, *policy);
          pass = pass && r.pass();
          reports.push_back(r.to_json());
        }
        Report obs = delzant::obstruction_witness();
        pass = pass && obs.pass();
        reports.push_back(obs.to_json());
        json j{{"pass", pass}, {"reports", reports}};
        out << j.dump(2) << "\n";
        return pass ? 0 : 1;
      };
    });
  }

  // ---- atlas ----
  auto* at = app.add_subcommand("atlas", "chart-atlas checks");
  at->require_subcommand(1);
  {
    auto* av = at->add_subcommand("verify", "compatibility of every overlapping chart pair");
    auto samples = std::make_shared<int>(400);
    auto tol = std::make_shared<double>(1e-9);
    auto rng_seed = std::make_shared<std::uint64_t>(2026);
    auto policy = std::make_shared<Exec>(Exec::Parallel);
    av->add_option("--samples", *samples, "overlap samples per pair")
        ->check(CLI::PositiveNumber);
    av->add_option("--tol", *tol, "residual tolerance")->check(CLI::PositiveNumber);
    av->add_option("--rng-seed", *rng_seed, "sampling seed");
    av->add_option("--policy", *policy, "serial|parallel")
        ->transform(CLI::CheckedTransformer(policy_map, CLI::ignore_case));
    av->callback([&, samples, tol, rng_seed, policy] {
      action = [&, samples, tol, rng_seed, policy]() -> int {
        const auto& charts = delzant::kite_charts();
        json reports = json::array();
        bool pass = true;
        for (std::size_t i = 0; i < charts.size(); ++i)
          for (std::size_t j = i + 1; j < charts.size(); ++j) {
            Report r = atlas::check_compatibility(charts[i], charts[j], *samples, *tol,
                                                  *rng_seed, *policy);
            pass = pass && r.pass();
            reports.push_back(r.to_json());
          }
        json j{{"pass", pass}, {"reports", reports}};
        out << j.dump(2) << "\n";
        return pass ? 0 : 1;
      };
    });
  }

  // ---- symmetry ----
  {
    auto* sym = app.add_subcommand("symmetry",
                                   "all ten kites produce the same reduction data");
    auto rng_seed = std::make_shared<std::uint64_t>(2026);
    sym->add_option("--rng-seed", *rng_seed, "seed for the translation probes");
    sym->callback([&, rng_seed] {
      action = [&, rng_seed]() -> int {
        json reports = json::array();
        bool pass = true;
        for (int sgn : {+1, -1})
          for (int k = 0; k < 5; ++k) {
            Report r = delzant::symmetry_equivalence(k, sgn, *rng_seed);
            pass = pass && r.pass();
            reports.push_back(r.to_json());
          }
        json j{{"pass", pass}, {"reports", reports}};
        out << j.dump(2) << "\n";
        return pass ? 0 : 1;
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    return action ? action() : 2;
  } catch (const CLI::ValidationError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace qk::cli
