#pragma once

// Random k-uniform hypergraphs and an exact 2-colorability solver.

#include <cstdint>
#include <optional>
#include <vector>

namespace threshold_lab {

using Edge = std::vector<int>;  // sorted, distinct vertex indices

struct Hypergraph {
  int n = 0;
  int k = 0;
  std::vector<Edge> edges;  // multiset: repeats allowed

  /// Throws DomainError unless every edge has k distinct sorted vertices in [0, n).
  void validate() const;
};

using Coloring = std::vector<std::uint8_t>;  // 0 = white, 1 = black

/// m independent uniform draws from the C(n,k) k-subsets of {0..n-1}.
Hypergraph generate(int n, int k, long m, std::uint64_t seed);

/// True iff no edge is monochromatic under `coloring`.
bool is_proper(const Hypergraph& h, const Coloring& coloring);

struct SolveResult {
  bool colorable = false;
  std::optional<Coloring> witness;
  long decisions = 0;  // branching nodes visited
};

struct SolverOptions {
  // Re-checks every forced assignment: flipping it must make the forcing edge
  // monochromatic. Violations throw std::logic_error.
  bool check_propagation = false;
};

/// Complete backtracking search with unit propagation. Vertex 0 is fixed to
/// color 0 to break the global color-flip symmetry.
SolveResult is_2colorable(const Hypergraph& h, const SolverOptions& options = {});

/// Number of proper colorings by enumeration of all 2^n assignments (n <= 24).
std::uint64_t count_colorings(const Hypergraph& h);

}  // namespace threshold_lab
