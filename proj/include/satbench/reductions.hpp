#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "satbench/cnf.hpp"

namespace satbench {

/// Repeats the first literal until every clause has width 3. Throws
/// DomainError for empty clauses or clauses wider than 3.
CnfFormula pad_to_width3(const CnfFormula& formula);

// ---------------------------------------------------------------- vertex cover

enum class GadgetKind { Literal, Clause };

struct VcVertex {
  GadgetKind kind = GadgetKind::Literal;
  Variable variable = 0;     // literal gadget: the variable; clause gadget: variable of the matched literal
  bool positive = true;      // literal polarity (for clause gadgets, of the matched literal)
  std::size_t clause = 0;    // clause gadget only, 0-based
  std::size_t position = 0;  // clause gadget only, 0..2

  /// "x3", "~x3" for literal gadgets; "c5.2" (1-based clause, 0-based slot) for triangles.
  std::string label() const;
};

struct VertexCoverInstance {
  std::vector<VcVertex> vertices;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::size_t k = 0;
  Variable num_variables = 0;
  std::size_t num_clauses = 0;

  /// Throws DomainError on self-loops, dangling endpoints or k > |V|.
  void validate() const;
  /// Index of the vertex with this label, or npos.
  std::size_t find(std::string_view label) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// Literal pair v_i, ¬v_i joined by an edge per variable; a triangle per
/// clause with each corner tied to its literal's gadget vertex; k = n + 2m.
/// Vertices: literal gadgets first (x1, ~x1, x2, ...), then triangles in
/// clause order.
VertexCoverInstance to_vertex_cover(const CnfFormula& formula);

/// True iff the (deduplicated) cover has at most k vertices and touches every
/// edge. Throws DomainError for vertex ids outside the instance.
bool check_cover(const VertexCoverInstance& instance, const std::vector<std::size_t>& cover);

inline constexpr std::size_t kVcBruteForceDefaultLimit = 64;

/// Exact decision by branching on uncovered edges with a matching lower
/// bound. Throws DomainError above max_vertices.
bool vc_brute_force(const VertexCoverInstance& instance, std::size_t max_vertices = kVcBruteForceDefaultLimit);

/// Cover of size exactly k built from a satisfying assignment: the true
/// literal vertex of each variable plus two corners of each triangle, leaving
/// out one corner whose literal sigma satisfies.
std::vector<std::size_t> cover_from_assignment(const VertexCoverInstance& instance, const CnfFormula& formula,
                                               const Assignment& sigma);

// --------------------------------------------------------------------- packing

struct Cell {
  std::int64_t x = 0, y = 0, z = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct Rod {
  Variable variable = 0;
  bool value = true;  // true-rod or false-rod
  std::vector<Cell> cells;
  std::size_t capacity = 0;  // slots 1..capacity

  /// "r3a" for the true-rod of variable 3, "r3b" for its false-rod.
  std::string label() const;
};

struct Token {
  std::size_t clause = 0;               // 0-based
  std::vector<std::size_t> allowed_rods;  // rod ids, ascending, no repeats

  /// "t1" for clause 0.
  std::string label() const;
};

struct PackingInstance {
  std::vector<Rod> rods;  // rod id 2(v-1) is the true-rod of v, 2(v-1)+1 the false-rod
  std::vector<Token> tokens;
  std::array<std::int64_t, 3> bounding_box{};  // extent along x, y, z from the origin
  Variable num_variables = 0;

  static std::size_t rod_id(Variable v, bool value) { return 2 * (v - 1) + (value ? 0 : 1); }
  /// Throws DomainError when the rod/token invariants do not hold.
  void validate() const;
  std::size_t find_rod(std::string_view label) const;
  std::size_t find_token(std::string_view label) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

struct Placement {
  std::size_t rod = 0;
  std::size_t slot = 0;  // 1..capacity
  friend bool operator==(const Placement&, const Placement&) = default;
};

struct PackingWitness {
  std::vector<std::size_t> selected_rods;
  std::map<std::size_t, Placement> token_placement;  // token id -> placement
};

/// Variable i owns a true-rod {(i,0,z) : z = 0..m} and a false-rod
/// {(i,1,z) : z = 1..m} ∪ {(i,0,0)}; the shared base cell makes them mutually
/// exclusive. Capacity is m on every rod. Token j may sit on the rods of the
/// literals of clause j.
PackingInstance to_packing(const CnfFormula& formula);

/// Checks (a) one rod per variable, (b) pairwise disjoint selected footprints,
/// (c) each token on a selected rod from its allowed set, (d) slots within
/// capacity and never shared. Throws DomainError for dangling rod or token ids.
bool check_packing(const PackingInstance& instance, const PackingWitness& witness);

/// Exact feasibility: every rod selection, then backtracking token placement.
/// Throws DomainError beyond 20 variables or 32 tokens.
bool packing_brute_force(const PackingInstance& instance);

/// Selects the rods sigma picks and puts token j in slot j+1 of its first
/// allowed rod that is selected. Tokens of falsified clauses stay unplaced.
PackingWitness packing_from_assignment(const PackingInstance& instance, const Assignment& sigma);

}  // namespace satbench
