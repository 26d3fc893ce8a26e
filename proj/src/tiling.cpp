#include "qk/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"
#include "qk/golden.hpp"

namespace qk::tiling {

using lattice::classify_edge;
using lattice::cross;
using lattice::EdgeClass;
using lattice::edge_ray;
using lattice::embed;
using lattice::phi_scale;
using lattice::PlanarPoint;

TileKind mirrored(TileKind k) {
  switch (k) {
    case TileKind::HalfKiteL: return TileKind::HalfKiteR;
    case TileKind::HalfKiteR: return TileKind::HalfKiteL;
    case TileKind::HalfDartL: return TileKind::HalfDartR;
    case TileKind::HalfDartR: return TileKind::HalfDartL;
  }
  return k;
}

const char* kind_name(TileKind k) {
  switch (k) {
    case TileKind::HalfKiteL: return "half_kite_l";
    case TileKind::HalfKiteR: return "half_kite_r";
    case TileKind::HalfDartL: return "half_dart_l";
    case TileKind::HalfDartR: return "half_dart_r";
  }
  return "?";
}

TileKind kind_from_name(const std::string& name) {
  for (TileKind k : {TileKind::HalfKiteL, TileKind::HalfKiteR, TileKind::HalfDartL,
                     TileKind::HalfDartR})
    if (name == kind_name(k)) return k;
  throw std::invalid_argument("unknown tile kind: '" + name + "'");
}

namespace {

TileKind make_kind(bool kite, bool left) {
  if (kite) return left ? TileKind::HalfKiteL : TileKind::HalfKiteR;
  return left ? TileKind::HalfDartL : TileKind::HalfDartR;
}

// exact signed-area orientation of (apex, b1, b2)
bool is_ccw(const RVector& apex, const RVector& b1, const RVector& b2) {
  PlanarPoint a = embed(apex);
  int s = exact::quad_sign(cross(embed(b1) - a, embed(b2) - a));
  if (s == 0) throw std::invalid_argument("degenerate half-tile");
  return s > 0;
}

HalfTile half(bool kite, const RVector& apex, const RVector& b1, const RVector& b2,
              int level = 0) {
  return {make_kind(kite, is_ccw(apex, b1, b2)), {apex, b1, b2}, level};
}

}  // namespace

Patch seed_patch(const std::string& name) {
  auto kite_halves = [](int k, int sgn) {
    RVector e;  // origin
    RVector a = sgn * RVector::unit(k);
    RVector b = -sgn * RVector::unit(k + 2);
    RVector g = -sgn * RVector::unit(k + 3);
    return std::vector<HalfTile>{half(true, e, b, a), half(true, e, g, a)};
  };
  auto dart_halves = [](const RVector& a, const RVector& b, const RVector& g,
                        const RVector& f) {
    return std::vector<HalfTile>{half(false, a, b, f), half(false, a, g, f)};
  };

  Patch p;
  p.provenance = name;
  for (int k = 0; k < 5; ++k) {
    if (name == "delta-plus-" + std::to_string(k)) {
      p.tiles = kite_halves(k, +1);
      return p;
    }
    if (name == "delta-minus-" + std::to_string(k)) {
      p.tiles = kite_halves(k, -1);
      return p;
    }
  }
  if (name == "sun") {
    for (int k = 0; k < 5; ++k)
      for (auto& t : kite_halves(k, +1)) p.tiles.push_back(t);
    return p;
  }
  if (name == "star") {
    // five darts with their 72-degree F-corners at the origin
    for (int k = 0; k < 5; ++k) {
      RVector f;
      RVector a = -(RVector::unit(k - 1) + RVector::unit(k + 1));  // -Y*_k / phi
      RVector b = RVector::unit(k + 3);
      RVector g = RVector::unit(k + 2);
      for (auto& t : dart_halves(a, b, g, f)) p.tiles.push_back(t);
    }
    return p;
  }
  if (name == "single-dart") {
    // the dart completing Delta_0^+ to the thick rhombus, detached
    RVector a = RVector::unit(0);
    RVector b = -RVector::unit(2);
    RVector g = -RVector::unit(3);
    RVector f = phi_scale(RVector::unit(0), 1);
    p.tiles = dart_halves(a, b, g, f);
    return p;
  }
  throw std::invalid_argument("unknown seed: '" + name + "'");
}

std::vector<std::string> seed_names() {
  std::vector<std::string> names;
  for (int k = 0; k < 5; ++k) names.push_back("delta-plus-" + std::to_string(k));
  for (int k = 0; k < 5; ++k) names.push_back("delta-minus-" + std::to_string(k));
  names.push_back("sun");
  names.push_back("star");
  names.push_back("single-dart");
  return names;
}

std::pair<std::uint64_t, std::uint64_t> substitution_counts(std::uint64_t hk,
                                                            std::uint64_t hd, int n) {
  for (int i = 0; i < n; ++i) {
    std::uint64_t nk = 2 * hk + hd;
    std::uint64_t nd = hk + hd;
    hk = nk;
    hd = nd;
  }
  return {hk, hd};
}

namespace {

// One substitution step for a single half-tile.  Inputs are tuples at the
// current scale; outputs are at the phi-scaled coordinates with longest edge
// back to length 1.
void subdivide(const HalfTile& t, HalfTile* out) {
  const bool left = is_left(t.kind);
  const int lv = t.level + 1;
  if (is_kite(t.kind)) {
    const RVector& e = t.v[0];
    const RVector& b = t.v[1];
    const RVector& a = t.v[2];
    RVector es = phi_scale(e, 1);
    RVector bs = phi_scale(b, 1);
    RVector as = phi_scale(a, 1);
    RVector pa = es + (a - e);                    // old A at the new scale
    RVector g1 = es + phi_scale(b - e, -1);       // 1/phi of the way to B
    out[0] = {make_kind(true, left), {bs, as, pa}, lv};
    out[1] = {make_kind(true, !left), {bs, g1, pa}, lv};
    out[2] = {make_kind(false, left), {g1, pa, es}, lv};
  } else {
    const RVector& a = t.v[0];
    const RVector& b = t.v[1];
    const RVector& f = t.v[2];
    RVector as = phi_scale(a, 1);
    RVector bs = phi_scale(b, 1);
    RVector fs = phi_scale(f, 1);
    RVector p = fs + (b - f);                     // unit mark along the long edge
    out[0] = {make_kind(true, !left), {fs, p, as}, lv};
    out[1] = {make_kind(false, left), {p, as, bs}, lv};
  }
}

}  // namespace

Patch inflate(const Patch& p, int steps, Exec policy) {
  if (steps < 1) throw std::invalid_argument("inflate: steps must be >= 1");
  Patch cur = p;
  for (int s = 0; s < steps; ++s) {
    const auto& in = cur.tiles;
    std::vector<std::size_t> offset(in.size() + 1, 0);
    for (std::size_t i = 0; i < in.size(); ++i)
      offset[i + 1] = offset[i] + (is_kite(in[i].kind) ? 3 : 2);
    Patch next;
    next.provenance = cur.provenance;
    next.tiles.resize(offset.back());
    HalfTile* out = next.tiles.data();
    parallel_for(in.size(), policy,
                 [&](std::size_t i) { subdivide(in[i], out + offset[i]); });
    cur = std::move(next);
  }
  cur.provenance = p.provenance + "/inflate:" + std::to_string(steps);
  return cur;
}

// ---------------------------------------------------------------------------
// verify_patch
// ---------------------------------------------------------------------------

namespace {

enum class EdgeType : std::uint8_t { LongReal, ShortReal, KiteDiag, DartDiag };

const char* edge_type_name(EdgeType t) {
  switch (t) {
    case EdgeType::LongReal: return "long";
    case EdgeType::ShortReal: return "short";
    case EdgeType::KiteDiag: return "kite-diagonal";
    case EdgeType::DartDiag: return "dart-diagonal";
  }
  return "?";
}

// slot 0: apex->b1, slot 1: b1->b2, slot 2: apex->b2
EdgeType slot_type(TileKind k, int slot) {
  if (is_kite(k)) {
    static constexpr EdgeType t[3] = {EdgeType::LongReal, EdgeType::ShortReal,
                                      EdgeType::KiteDiag};
    return t[slot];
  }
  static constexpr EdgeType t[3] = {EdgeType::ShortReal, EdgeType::LongReal,
                                    EdgeType::DartDiag};
  return t[slot];
}

// Endpoint marks orient real edges so that legal contacts pair mark-to-mark:
//   long edges:  kite (E, B), dart (B, F)
//   short edges: kite (B, A), dart (apex, B)
// and diagonals (apex, far end).  With the (apex, b1, b2) layout every edge
// slot already runs in mark order, so the slot's corner order IS the mark
// order and alignment reduces to comparing endpoint ids slotwise.

// corner widths in units of 36 degrees: kite (apex, b1, b2) = (1, 2, 2),
// dart = (3, 1, 1)
int corner_width(TileKind k, int corner) {
  if (is_kite(k)) {
    static constexpr int w[3] = {1, 2, 2};
    return w[corner];
  }
  static constexpr int w[3] = {3, 1, 1};
  return w[corner];
}

struct TileScan {
  bool usable = false;
  std::array<EdgeClass, 3> cls;
  // per corner: starting ray of the ccw sector span, or -1 on failure
  std::array<int, 3> corner_start{-1, -1, -1};
  std::array<std::string, 3> edge_fail;      // non-empty -> violation text
  std::array<bool, 3> edge_fail_is_class{};  // true: NotAnEdge, false: wrong length
  std::string shape_fail;
};

int reverse_ray(int r) { return (r + 10) % 20; }

// ccw distance from ray a to ray b in sector units (both odd residues mod 20)
int ccw_sectors(int a, int b) { return ((b - a + 20) % 20) / 2; }

void scan_tile(const HalfTile& t, TileScan& s) {
  const RVector d01 = t.v[1] - t.v[0];
  const RVector d12 = t.v[2] - t.v[1];
  const RVector d02 = t.v[2] - t.v[0];
  s.cls[0] = classify_edge(d01);
  s.cls[1] = classify_edge(d12);
  s.cls[2] = classify_edge(d02);

  for (int i = 0; i < 3; ++i) {
    if (!s.cls[i].is_edge()) {
      const RVector& d = i == 0 ? d01 : (i == 1 ? d12 : d02);
      s.edge_fail[i] = "delta " + d.str() + " is not an edge vector";
      s.edge_fail_is_class[i] = true;
    }
  }
  if (!s.edge_fail[0].empty() || !s.edge_fail[1].empty() || !s.edge_fail[2].empty())
    return;

  // expected lengths per slot: long = Long class, short/diagonals accordingly
  auto expect = [&](int slot, EdgeClass::Kind want) {
    if (s.cls[slot].kind != want)
      s.edge_fail[slot] = std::string("edge is ") +
                          (s.cls[slot].kind == EdgeClass::Kind::Long ? "long" : "short") +
                          ", tile kind requires the other";
  };
  if (is_kite(t.kind)) {
    expect(0, EdgeClass::Kind::Long);
    expect(1, EdgeClass::Kind::Short);
    expect(2, EdgeClass::Kind::Long);
  } else {
    expect(0, EdgeClass::Kind::Short);
    expect(1, EdgeClass::Kind::Long);
    expect(2, EdgeClass::Kind::Short);
  }
  if (!s.edge_fail[0].empty() || !s.edge_fail[1].empty() || !s.edge_fail[2].empty())
    return;

  const int r01 = edge_ray(s.cls[0]);
  const int r12 = edge_ray(s.cls[1]);
  const int r02 = edge_ray(s.cls[2]);
  // rays leaving each corner: apex {r01, r02}, b1 {rev r01, r12},
  // b2 {rev r02, rev r12}
  const std::array<std::pair<int, int>, 3> rays = {
      std::pair<int, int>{r01, r02},
      std::pair<int, int>{reverse_ray(r01), r12},
      std::pair<int, int>{reverse_ray(r02), reverse_ray(r12)},
  };
  bool left_from_apex = false;
  for (int c = 0; c < 3; ++c) {
    const int w = corner_width(t.kind, c);
    const auto [ra, rb] = rays[c];
    if (ccw_sectors(ra, rb) == w) {
      s.corner_start[c] = ra;
      if (c == 0) left_from_apex = true;
    } else if (ccw_sectors(rb, ra) == w) {
      s.corner_start[c] = rb;
    } else {
      s.shape_fail = "corner " + std::to_string(c) + " rays do not span the corner angle";
      return;
    }
  }
  if (left_from_apex != is_left(t.kind)) {
    s.shape_fail = "signed area contradicts the L/R kind";
    return;
  }
  s.usable = true;
}

struct VertexInterner {
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> by_hash;
  std::vector<RVector> tuples;

  std::uint32_t intern(const RVector& v) {
    auto& bucket = by_hash[v.hash()];
    for (auto id : bucket)
      if (tuples[id] == v) return id;
    auto id = static_cast<std::uint32_t>(tuples.size());
    tuples.push_back(v);
    bucket.push_back(id);
    return id;
  }

  const std::uint32_t* find(const RVector& v) const {
    auto it = by_hash.find(v.hash());
    if (it == by_hash.end()) return nullptr;
    for (const auto& id : it->second)
      if (tuples[id] == v) return &id;
    return nullptr;
  }
};

struct EdgeUse {
  std::uint32_t tile;
  std::uint8_t slot;
  EdgeType type;
  bool left;
  bool kite;
  // vertex ids in mark order (mark 0 endpoint first)
  std::uint32_t m0, m1;
};

}  // namespace

VerificationReport verify_patch(const Patch& p, Exec policy) {
  VerificationReport rep;
  rep.tile_count = p.tiles.size();
  for (const auto& t : p.tiles) (is_kite(t.kind) ? rep.kite_halves : rep.dart_halves)++;

  std::vector<TileScan> scan(p.tiles.size());
  parallel_for(p.tiles.size(), policy, [&](std::size_t i) { scan_tile(p.tiles[i], scan[i]); });

  for (std::size_t i = 0; i < p.tiles.size(); ++i) {
    for (int s = 0; s < 3; ++s)
      if (!scan[i].edge_fail[s].empty())
        rep.violations.push_back({scan[i].edge_fail_is_class[s]
                                      ? "edge not in the quasilattice edge classes"
                                      : "edge length pattern does not match tile kind",
                                  {i},
                                  "slot " + std::to_string(s) + ": " + scan[i].edge_fail[s]});
    if (!scan[i].shape_fail.empty())
      rep.violations.push_back({"half-tile shape invalid", {i}, scan[i].shape_fail});
  }

  // vertex ids (deterministic: first occurrence in tile order)
  VertexInterner vx;
  std::vector<std::array<std::uint32_t, 3>> tv(p.tiles.size());
  for (std::size_t i = 0; i < p.tiles.size(); ++i)
    for (int c = 0; c < 3; ++c) tv[i][c] = vx.intern(p.tiles[i].v[c]);
  rep.vertex_count = vx.tuples.size();

  for (std::size_t i = 0; i < p.tiles.size(); ++i) {
    if (!scan[i].usable) continue;
    for (int s = 0; s < 3; ++s)
      rep.edge_class_histogram[scan[i].cls[s].kind == EdgeClass::Kind::Long ? 0 : 1]++;
  }

  // sector coverage around each vertex (10 sectors of 36 degrees)
  std::vector<std::array<std::uint8_t, 10>> sectors(vx.tuples.size(),
                                                    std::array<std::uint8_t, 10>{});
  std::vector<std::uint8_t> overlap(vx.tuples.size(), 0);
  for (std::size_t i = 0; i < p.tiles.size(); ++i) {
    if (!scan[i].usable) continue;
    for (int c = 0; c < 3; ++c) {
      const int w = corner_width(p.tiles[i].kind, c);
      const int s0 = (scan[i].corner_start[c] - 1) / 2;  // start ray is odd
      for (int m = 0; m < w; ++m) {
        auto& cnt = sectors[tv[i][c]][(s0 + m) % 10];
        if (cnt == 1) overlap[tv[i][c]] = 1;
        if (cnt < 2) ++cnt;
      }
    }
  }
  for (std::uint32_t v = 0; v < vx.tuples.size(); ++v) {
    if (overlap[v]) {
      std::vector<std::size_t> tiles;
      for (std::size_t i = 0; i < p.tiles.size(); ++i)
        if (tv[i][0] == v || tv[i][1] == v || tv[i][2] == v) tiles.push_back(i);
      rep.violations.push_back(
          {"tiles overlap around a vertex", tiles, "vertex " + vx.tuples[v].str()});
      continue;
    }
    bool full = true;
    for (int s = 0; s < 10; ++s) full = full && sectors[v][s] == 1;
    (full ? rep.interior_vertices : rep.boundary_vertices)++;
  }

  // edge-sharing map
  std::unordered_map<std::uint64_t, std::vector<EdgeUse>> edges;
  static constexpr int slot_corners[3][2] = {{0, 1}, {1, 2}, {0, 2}};
  for (std::size_t i = 0; i < p.tiles.size(); ++i) {
    if (!scan[i].usable) continue;
    for (int s = 0; s < 3; ++s) {
      const std::uint32_t a = tv[i][slot_corners[s][0]];
      const std::uint32_t b = tv[i][slot_corners[s][1]];
      const std::uint64_t key =
          (static_cast<std::uint64_t>(std::min(a, b)) << 32) | std::max(a, b);
      edges[key].push_back({static_cast<std::uint32_t>(i), static_cast<std::uint8_t>(s),
                            slot_type(p.tiles[i].kind, s), is_left(p.tiles[i].kind),
                            is_kite(p.tiles[i].kind), a, b});
    }
  }

  std::vector<std::uint64_t> keys;
  keys.reserve(edges.size());
  for (const auto& [k, v] : edges) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  rep.edge_count = keys.size();

  // full tiles recovered from shared diagonals, for the rhombus scan:
  // (apex id, far id, b1 of each half)
  struct FullTile {
    std::uint32_t apex, far, w1, w2;
    std::size_t t1, t2;
  };
  std::vector<FullTile> kites, darts;

  for (auto key : keys) {
    const auto& uses = edges[key];
    if (uses.size() == 1) {
      rep.boundary_edges++;
      continue;
    }
    if (uses.size() > 2) {
      std::vector<std::size_t> tiles;
      for (const auto& u : uses) tiles.push_back(u.tile);
      rep.violations.push_back({"edge shared by more than two tiles", tiles, ""});
      continue;
    }
    rep.shared_edges++;
    const EdgeUse& ua = uses[0];
    const EdgeUse& ub = uses[1];
    if (ua.type != ub.type) {
      rep.violations.push_back({"shared edge type mismatch",
                                {ua.tile, ub.tile},
                                std::string(edge_type_name(ua.type)) + " vs " +
                                    edge_type_name(ub.type)});
      continue;
    }
    if (ua.m0 != ub.m0 || ua.m1 != ub.m1) {
      rep.violations.push_back({"shared edge orientation mismatch",
                                {ua.tile, ub.tile},
                                std::string("type ") + edge_type_name(ua.type)});
      continue;
    }
    if (ua.type == EdgeType::KiteDiag || ua.type == EdgeType::DartDiag) {
      if (ua.left == ub.left) {
        rep.violations.push_back(
            {"bisecting diagonal joins same-handed halves", {ua.tile, ub.tile}, ""});
        continue;
      }
      FullTile ft{ua.m0, ua.m1, tv[ua.tile][1], tv[ub.tile][1], ua.tile, ub.tile};
      (ua.type == EdgeType::KiteDiag ? kites : darts).push_back(ft);
    }
  }
  rep.full_kites = kites.size();
  rep.full_darts = darts.size();

  // thick rhombus: a dart sharing its A-corner and both short edges with a kite
  {
    std::unordered_map<std::uint32_t, std::vector<const FullTile*>> kites_by_far;
    for (const auto& ft : kites) kites_by_far[ft.far].push_back(&ft);
    auto wing_pair = [](const FullTile& ft) {
      return std::pair<std::uint32_t, std::uint32_t>{std::min(ft.w1, ft.w2),
                                                     std::max(ft.w1, ft.w2)};
    };
    for (const auto& ft : darts) {
      auto it = kites_by_far.find(ft.apex);
      if (it == kites_by_far.end()) continue;
      for (const auto* kt : it->second)
        if (wing_pair(*kt) == wing_pair(ft))
          rep.violations.push_back(
              {"kite and dart form a thick rhombus", {kt->t1, kt->t2, ft.t1, ft.t2}, ""});
    }
  }

  // T-joints: a patch vertex must not sit in the interior of an edge.  The
  // interior R-points reachable by the substitution lie at 1/phi and 1/phi^2
  // along the edge.
  for (auto key : keys) {
    const auto& uses = edges[key];
    const EdgeUse& u = uses[0];
    const RVector& a = vx.tuples[u.m0];
    RVector d = vx.tuples[u.m1] - a;
    for (int pw : {-1, -2}) {
      RVector cand = a + phi_scale(d, pw);
      if (const auto* hit = vx.find(cand); hit != nullptr) {
        std::vector<std::size_t> tiles;
        for (const auto& uu : uses) tiles.push_back(uu.tile);
        rep.violations.push_back(
            {"vertex lies in the interior of an edge", tiles, "vertex " + cand.str()});
      }
    }
  }

  rep.vertices = vx.tuples;
  std::sort(rep.vertices.begin(), rep.vertices.end());
  return rep;
}

// ---------------------------------------------------------------------------
// float reconstruction and decoding
// ---------------------------------------------------------------------------

namespace {

Vec2 embed_float(const RVector& v) {
  PlanarPoint p = embed(v);
  return {exact::to_float(p.x), exact::to_float(p.y)};
}

}  // namespace

FloatPatch to_float_seed(const Patch& p) {
  FloatPatch fp;
  fp.tiles.reserve(p.tiles.size());
  for (const auto& t : p.tiles)
    fp.tiles.push_back(
        {t.kind, {embed_float(t.v[0]), embed_float(t.v[1]), embed_float(t.v[2])}});
  if (!p.tiles.empty()) {
    fp.base_coord = p.tiles[0].v[0];
    fp.base_point = embed_float(fp.base_coord);
  }
  return fp;
}

FloatPatch inflate_float(const FloatPatch& p, int steps) {
  if (steps < 1) throw std::invalid_argument("inflate_float: steps must be >= 1");
  const double phi = exact::kPhi;
  const double inv_phi = 1.0 / exact::kPhi;
  FloatPatch cur = p;
  for (int s = 0; s < steps; ++s) {
    FloatPatch next;
    next.tiles.reserve(cur.tiles.size() * 3);
    for (const auto& t : cur.tiles) {
      const bool left = is_left(t.kind);
      if (is_kite(t.kind)) {
        Vec2 e = t.v[0], b = t.v[1], a = t.v[2];
        Vec2 es = phi * e, bs = phi * b, as = phi * a;
        Vec2 pa = es + (a - e);
        Vec2 g1 = es + inv_phi * (b - e);
        next.tiles.push_back({make_kind(true, left), {bs, as, pa}});
        next.tiles.push_back({make_kind(true, !left), {bs, g1, pa}});
        next.tiles.push_back({make_kind(false, left), {g1, pa, es}});
      } else {
        Vec2 a = t.v[0], b = t.v[1], f = t.v[2];
        Vec2 as = phi * a, bs = phi * b, fs = phi * f;
        Vec2 pt = fs + (b - f);
        next.tiles.push_back({make_kind(true, !left), {fs, pt, as}});
        next.tiles.push_back({make_kind(false, left), {pt, as, bs}});
      }
    }
    next.base_point = phi * cur.base_point;
    next.base_coord = phi_scale(cur.base_coord, 1);
    cur = std::move(next);
  }
  return cur;
}

namespace {

struct GridIndex {
  double cell;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets;
  const std::vector<Vec2>* pts;

  static std::uint64_t key(std::int64_t ix, std::int64_t iy) {
    return static_cast<std::uint64_t>(ix) * 0x9E3779B97F4A7C15ull ^
           static_cast<std::uint64_t>(iy);
  }

  void insert(std::uint32_t id, Vec2 p) {
    buckets[key(static_cast<std::int64_t>(std::floor(p.x / cell)),
                static_cast<std::int64_t>(std::floor(p.y / cell)))]
        .push_back(id);
  }

  std::int64_t cx(double v) const { return static_cast<std::int64_t>(std::floor(v / cell)); }

  // nearest point within `within`, or UINT32_MAX
  std::uint32_t nearest(Vec2 q, double within) const {
    std::uint32_t best = UINT32_MAX;
    double best_d = within;
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = buckets.find(key(cx(q.x) + dx, cx(q.y) + dy));
        if (it == buckets.end()) continue;
        for (auto id : it->second) {
          const Vec2& p = (*pts)[id];
          double d = std::hypot(p.x - q.x, p.y - q.y);
          if (d <= best_d) {
            best_d = d;
            best = id;
          }
        }
      }
    return best;
  }
};

struct Candidate {
  Vec2 dir;
  RVector tuple;
};

const std::vector<Candidate>& edge_candidates() {
  static const std::vector<Candidate> c = [] {
    std::vector<Candidate> v;
    for (const auto& [vec, cls] : lattice::edge_class_table()) {
      (void)cls;
      v.push_back({embed_float(vec), vec});
    }
    return v;
  }();
  return c;
}

}  // namespace

PatchDecoder::PatchDecoder(const FloatPatch& fp, int max_norm, double tol)
    : max_norm_(max_norm), tol_(tol) {
  const double merge_tol = 1e-6;
  GridIndex grid{1e-3, {}, &points_};
  tile_vertex_.resize(fp.tiles.size());
  for (std::size_t i = 0; i < fp.tiles.size(); ++i) {
    for (int c = 0; c < 3; ++c) {
      std::uint32_t id = grid.nearest(fp.tiles[i].v[c], merge_tol);
      if (id == UINT32_MAX) {
        id = static_cast<std::uint32_t>(points_.size());
        points_.push_back(fp.tiles[i].v[c]);
        grid.insert(id, fp.tiles[i].v[c]);
      }
      tile_vertex_[i][c] = id;
    }
  }
  outcomes_.assign(points_.size(), {});

  // adjacency from tile edges
  std::vector<std::vector<std::uint32_t>> adj(points_.size());
  {
    std::unordered_map<std::uint64_t, bool> seen;
    static constexpr int sc[3][2] = {{0, 1}, {1, 2}, {0, 2}};
    for (const auto& tvx : tile_vertex_)
      for (auto [i, j] : sc) {
        std::uint32_t a = tvx[i], b = tvx[j];
        std::uint64_t key = (static_cast<std::uint64_t>(std::min(a, b)) << 32) |
                            std::max(a, b);
        if (seen.emplace(key, true).second) {
          adj[a].push_back(b);
          adj[b].push_back(a);
        }
      }
  }

  std::uint32_t base = grid.nearest(fp.base_point, merge_tol);
  std::vector<std::uint8_t> decoded(points_.size(), 0);
  if (base != UINT32_MAX) {
    outcomes_[base].coord = fp.base_coord;
    outcomes_[base].ok = true;
    decoded[base] = 1;
    std::queue<std::uint32_t> q;
    q.push(base);
    while (!q.empty()) {
      std::uint32_t v = q.front();
      q.pop();
      for (std::uint32_t w : adj[v]) {
        Vec2 d = points_[w] - points_[v];
        double best = 1e300, second = 1e300;
        const Candidate* pick = nullptr;
        for (const auto& cand : edge_candidates()) {
          double dist = std::hypot(d.x - cand.dir.x, d.y - cand.dir.y);
          if (dist < best) {
            second = best;
            best = dist;
            pick = &cand;
          } else if (dist < second) {
            second = dist;
          }
        }
        if (pick == nullptr || best > 0.05) {
          if (!decoded[w]) {
            outcomes_[w] = {false, {}, best, "no edge class within tolerance"};
          }
          continue;
        }
        if (second - best < 0.05) {
          if (!decoded[w]) outcomes_[w] = {false, {}, best, "ambiguous edge class"};
          continue;
        }
        RVector coord = outcomes_[v].coord + pick->tuple;
        if (coord.linf() > max_norm_) {
          if (!decoded[w]) outcomes_[w] = {false, {}, 0, "norm bound exceeded"};
          continue;
        }
        if (decoded[w]) {
          if (!(outcomes_[w].coord == coord) && outcomes_[w].ok)
            outcomes_[w] = {false, {}, 0, "inconsistent decodings along two paths"};
          continue;
        }
        outcomes_[w] = {true, coord, 0, ""};
        decoded[w] = 1;
        q.push(w);
      }
    }
  }

  for (std::uint32_t v = 0; v < points_.size(); ++v) {
    auto& oc = outcomes_[v];
    if (!decoded[v] && oc.note.empty()) {
      oc = {false, {}, 0, "not reached from the base vertex"};
    }
    if (oc.ok) {
      Vec2 e = embed_float(oc.coord);
      oc.residual = std::hypot(e.x - points_[v].x, e.y - points_[v].y);
      if (oc.residual > tol_) {
        oc.ok = false;
        oc.note = "embedding residual exceeds tolerance";
      }
    }
    if (!oc.ok)
      ++no_match_;
    else
      max_residual_ = std::max(max_residual_, oc.residual);
  }
}

std::uint32_t PatchDecoder::nearest(Vec2 q, double within) const {
  std::uint32_t best = UINT32_MAX;
  double best_d = within;
  for (std::uint32_t i = 0; i < points_.size(); ++i) {
    double d = std::hypot(points_[i].x - q.x, points_[i].y - q.y);
    if (d <= best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

DecodeOutcome PatchDecoder::decode(Vec2 q) const {
  std::uint32_t id = nearest(q, 1e-6);
  if (id == UINT32_MAX) return {false, {}, 0, "no patch vertex at the query point"};
  return outcomes_[id];
}

DecodeOutcome PatchDecoder::decode(Vec2 q, int max_norm) const {
  DecodeOutcome oc = decode(q);
  if (oc.ok && oc.coord.linf() > max_norm) return {false, {}, 0, "norm bound exceeded"};
  return oc;
}

const DecodeOutcome& PatchDecoder::tile_corner(std::size_t t, int c) const {
  return outcomes_[tile_vertex_[t][c]];
}

// ---------------------------------------------------------------------------
// patch files
// ---------------------------------------------------------------------------

void save_jsonl(const Patch& p, std::ostream& os) {
  for (const auto& t : p.tiles) {
    nlohmann::json j;
    j["kind"] = kind_name(t.kind);
    j["level"] = t.level;
    auto verts = nlohmann::json::array();
    for (const auto& v : t.v) verts.push_back(v.n);
    j["vertices"] = verts;
    os << j.dump() << "\n";
  }
}

Patch load_jsonl(std::istream& is) {
  Patch p;
  p.provenance = "file";
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("kind") || !j.contains("vertices"))
      throw std::runtime_error("patch file: bad record at line " + std::to_string(lineno));
    HalfTile t;
    t.kind = kind_from_name(j["kind"].get<std::string>());
    t.level = j.value("level", 0);
    const auto& verts = j["vertices"];
    if (!verts.is_array() || verts.size() != 3)
      throw std::runtime_error("patch file: bad vertices at line " + std::to_string(lineno));
    for (int c = 0; c < 3; ++c) {
      std::array<std::int64_t, 5> raw{};
      for (int i = 0; i < 5; ++i) raw[i] = verts[c].at(i).get<std::int64_t>();
      t.v[c] = RVector::canonicalized(raw);
    }
    p.tiles.push_back(std::move(t));
  }
  return p;
}

}  // namespace qk::tiling
