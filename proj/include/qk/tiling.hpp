#pragma once
// Kite-and-dart patches over the quasilattice R, built from Robinson
// half-tiles (the isosceles bisections of kite and dart).
//
// A half-tile stores (apex, base1, base2) as canonical R-tuples:
//
//   half-kite: apex = the 36-degree corner E; apex->base1 is a real long
//   edge (length 1), apex->base2 the kite's bisecting diagonal (length 1),
//   base1->base2 a real short edge (length 1/phi).
//
//   half-dart: apex = the 108-degree corner; apex->base1 is a real short
//   edge (1/phi), apex->base2 the dart's bisecting diagonal (1/phi),
//   base1->base2 a real long edge (length 1).
//
// Substitution: a patch is first scaled by phi (integer substitution on
// tuples, longest edge stays 1), then every half-kite splits into two
// half-kites and a half-dart, every half-dart into a half-kite and a
// half-dart.  Matching rules are enforced structurally: each edge carries a
// type and oriented endpoint marks, and shared edges must agree.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qk/parallel.hpp"
#include "qk/quasilattice.hpp"

namespace qk::tiling {

using lattice::RVector;

enum class TileKind : std::uint8_t { HalfKiteL, HalfKiteR, HalfDartL, HalfDartR };

inline bool is_kite(TileKind k) { return k == TileKind::HalfKiteL || k == TileKind::HalfKiteR; }
inline bool is_left(TileKind k) { return k == TileKind::HalfKiteL || k == TileKind::HalfDartL; }
TileKind mirrored(TileKind k);
const char* kind_name(TileKind k);
TileKind kind_from_name(const std::string& name);

struct HalfTile {
  TileKind kind;
  std::array<RVector, 3> v;  // apex, base1, base2
  int level = 0;             // inflation generation

  friend bool operator==(const HalfTile& a, const HalfTile& b) {
    return a.kind == b.kind && a.v == b.v && a.level == b.level;
  }
};

struct Patch {
  std::vector<HalfTile> tiles;
  std::string provenance;
};

// Named seeds: "delta-plus-K", "delta-minus-K" (K in 0..4), "sun", "star",
// "single-dart".  Kites Delta_K^+- have E at the origin and A - E = +-Y*_K.
Patch seed_patch(const std::string& name);
std::vector<std::string> seed_names();

// steps >= 1; throws std::invalid_argument otherwise.
Patch inflate(const Patch& p, int steps, Exec policy = Exec::Parallel);

// Half-tile counts (kite halves, dart halves) after applying the
// substitution matrix [[2,1],[1,1]] n times to (hk, hd).
std::pair<std::uint64_t, std::uint64_t> substitution_counts(std::uint64_t hk,
                                                            std::uint64_t hd, int n);

struct Violation {
  std::string what;
  std::vector<std::size_t> tiles;
  std::string detail;
};

struct VerificationReport {
  std::size_t tile_count = 0, kite_halves = 0, dart_halves = 0;
  std::size_t vertex_count = 0, interior_vertices = 0, boundary_vertices = 0;
  std::size_t edge_count = 0, shared_edges = 0, boundary_edges = 0;
  std::size_t full_kites = 0, full_darts = 0;
  std::array<std::size_t, 2> edge_class_histogram{};  // long, short
  std::vector<RVector> vertices;                      // canonical, sorted
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

// Checks, combinatorially and exactly: every edge is one of the twenty
// classified edge vectors; corner angles (multiples of pi/5) tile each
// interior vertex exactly once around; shared edges agree in type, endpoint
// marks, and (for diagonals) complete a full tile; no kite+dart pair forms
// the thick rhombus.
VerificationReport verify_patch(const Patch& p, Exec policy = Exec::Parallel);

// ---- floating-point reconstruction and decoding ----

struct Vec2 {
  double x = 0, y = 0;
  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double c, Vec2 a) { return {c * a.x, c * a.y}; }
};

struct FloatTile {
  TileKind kind;
  std::array<Vec2, 3> v;
};

struct FloatPatch {
  std::vector<FloatTile> tiles;
  Vec2 base_point;        // float coordinates of a vertex with known R-tuple
  RVector base_coord;
};

// Exact patch -> float coordinates (one rounding per coordinate).
FloatPatch to_float_seed(const Patch& p);

// Pure double substitution mirroring inflate(); accumulates rounding error.
FloatPatch inflate_float(const FloatPatch& p, int steps);

struct DecodeOutcome {
  bool ok = false;
  RVector coord;
  double residual = 0;
  std::string note;
};

// Recovers exact R-tuples for every vertex of a float patch by walking the
// edge graph from the base vertex and accumulating classified edge vectors.
class PatchDecoder {
 public:
  explicit PatchDecoder(const FloatPatch& fp, int max_norm = 1 << 20, double tol = 1e-9);

  // The spec operation: decode one float point (must be a patch vertex).
  DecodeOutcome decode(Vec2 q) const;
  DecodeOutcome decode(Vec2 q, int max_norm) const;

  std::size_t vertex_count() const { return outcomes_.size(); }
  std::size_t no_match_count() const { return no_match_; }
  double max_residual() const { return max_residual_; }
  // outcome for corner c of tile t
  const DecodeOutcome& tile_corner(std::size_t t, int c) const;

 private:
  int max_norm_;
  double tol_;
  std::vector<Vec2> points_;
  std::vector<DecodeOutcome> outcomes_;
  std::vector<std::array<std::uint32_t, 3>> tile_vertex_;
  std::size_t no_match_ = 0;
  double max_residual_ = 0;

  std::uint32_t nearest(Vec2 q, double within) const;
};

// Patch file format: JSON lines, one half-tile per line
//   {"kind": "...", "level": n, "vertices": [[5 ints], [5 ints], [5 ints]]}
void save_jsonl(const Patch& p, std::ostream& os);
Patch load_jsonl(std::istream& is);

}  // namespace qk::tiling
