#include "threshold_lab/hypergraph.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <stdexcept>
#include <string>

#include "threshold_lab/errors.hpp"
#include "threshold_lab/rng.hpp"

namespace threshold_lab {

void Hypergraph::validate() const {
  if (n < 0 || k < 1) throw DomainError("Hypergraph: invalid n or k");
  for (const auto& e : edges) {
    if (static_cast<int>(e.size()) != k) throw DomainError("Hypergraph: edge of wrong size");
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] < 0 || e[i] >= n) throw DomainError("Hypergraph: vertex out of range");
      if (i > 0 && e[i - 1] >= e[i]) throw DomainError("Hypergraph: edge not sorted and distinct");
    }
  }
}

Hypergraph generate(int n, int k, long m, std::uint64_t seed) {
  if (k < 3) throw DomainError("generate: k must be >= 3");
  if (k > n) throw DomainError("generate: k = " + std::to_string(k) + " exceeds n = " + std::to_string(n));
  if (m < 0) throw DomainError("generate: m must be >= 0");
  SplitMix64 rng(seed);
  Hypergraph h{n, k, {}};
  h.edges.reserve(static_cast<std::size_t>(m));
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  for (long e = 0; e < m; ++e) {
    // Partial Fisher-Yates: the first k slots are a uniform k-subset for any
    // starting arrangement of perm.
    for (int i = 0; i < k; ++i) {
      const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
      std::swap(perm[i], perm[j]);
    }
    Edge edge(perm.begin(), perm.begin() + k);
    std::sort(edge.begin(), edge.end());
    h.edges.push_back(std::move(edge));
  }
  return h;
}

bool is_proper(const Hypergraph& h, const Coloring& coloring) {
  if (static_cast<int>(coloring.size()) != h.n) return false;
  for (const auto& e : h.edges) {
    bool black = false, white = false;
    for (int v : e) (coloring[v] ? black : white) = true;
    if (!(black && white)) return false;
  }
  return true;
}

namespace {

constexpr std::uint8_t kUnset = 2;

class Solver {
 public:
  Solver(const Hypergraph& h, const SolverOptions& options) : n_(h.n), k_(h.k), options_(options) {
    edges_ = h.edges;
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    occ_.resize(n_);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      for (int v : edges_[e]) occ_[v].push_back(static_cast<int>(e));
    }
    counts_.assign(edges_.size(), {0, 0});
    color_.assign(n_, kUnset);
  }

  SolveResult run() {
    SolveResult res;
    // Vertices outside every edge are unconstrained.
    for (int v = 0; v < n_; ++v) {
      if (occ_[v].empty()) color_[v] = 0;
    }
    bool ok = true;
    if (n_ > 0 && color_[0] == kUnset) ok = assign(0, 0, -1) && propagate();
    ok = ok && search();
    res.decisions = decisions_;
    res.colorable = ok;
    if (ok) res.witness = Coloring(color_.begin(), color_.end());
    return res;
  }

 private:
  struct Forced {
    int vertex;
    std::uint8_t color;
    int reason;
  };

  // Colors v and updates edge counters; queues forced vertices.
  // Returns false if some edge becomes monochromatic.
  bool assign(int v, std::uint8_t c, int reason) {
    if (color_[v] != kUnset) return color_[v] == c;
    if (options_.check_propagation && reason >= 0) check_forcing(v, c, reason);
    color_[v] = c;
    trail_.push_back(v);
    bool ok = true;
    for (int e : occ_[v]) {
      auto& cnt = counts_[e];
      ++cnt[c];
      if (cnt[c] == k_) {
        ok = false;
      } else if (cnt[c] == k_ - 1 && cnt[1 - c] == 0) {
        for (int u : edges_[e]) {
          if (color_[u] == kUnset) {
            queue_.push_back({u, static_cast<std::uint8_t>(1 - c), e});
            break;
          }
        }
      }
    }
    return ok;
  }

  void check_forcing(int v, std::uint8_t c, int reason) const {
    for (int u : edges_[reason]) {
      if (u != v && color_[u] != 1 - c) {
        throw std::logic_error("unsound propagation at vertex " + std::to_string(v));
      }
    }
  }

  bool propagate() {
    while (!queue_.empty()) {
      const Forced f = queue_.back();
      queue_.pop_back();
      if (!assign(f.vertex, f.color, f.reason)) {
        queue_.clear();
        return false;
      }
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      const int v = trail_.back();
      trail_.pop_back();
      for (int e : occ_[v]) --counts_[e][color_[v]];
      color_[v] = kUnset;
    }
  }

  // Most-constrained vertex: largest number of edges whose colored part is
  // single-colored. Returns -1 when every vertex is colored.
  std::pair<int, std::uint8_t> pick() const {
    std::vector<int> score(n_, 0), black(n_, 0);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const auto& cnt = counts_[e];
      const bool at_risk = (cnt[0] > 0) != (cnt[1] > 0);
      if (!at_risk) continue;
      const int c = cnt[1] > 0 ? 1 : 0;
      for (int u : edges_[e]) {
        if (color_[u] == kUnset) {
          ++score[u];
          black[u] += c;
        }
      }
    }
    int best = -1;
    for (int v = 0; v < n_; ++v) {
      if (color_[v] != kUnset) continue;
      if (best < 0 || score[v] > score[best]) best = v;
    }
    if (best < 0) return {-1, 0};
    // Opposite of the majority color among its at-risk edges.
    const std::uint8_t first = 2 * black[best] > score[best] ? 0 : (2 * black[best] < score[best] ? 1 : 0);
    return {best, first};
  }

  bool search() {
    const auto [v, first] = pick();
    if (v < 0) return true;
    for (std::uint8_t c : {first, static_cast<std::uint8_t>(1 - first)}) {
      ++decisions_;
      const std::size_t mark = trail_.size();
      if (assign(v, c, -1) && propagate() && search()) return true;
      queue_.clear();
      undo(mark);
    }
    return false;
  }

  int n_;
  int k_;
  SolverOptions options_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> occ_;
  std::vector<std::array<int, 2>> counts_;
  std::vector<std::uint8_t> color_;
  std::vector<int> trail_;
  std::vector<Forced> queue_;
  long decisions_ = 0;
};

}  // namespace

SolveResult is_2colorable(const Hypergraph& h, const SolverOptions& options) {
  h.validate();
  SolveResult res = Solver(h, options).run();
  if (res.colorable && !is_proper(h, *res.witness)) {
    throw std::logic_error("is_2colorable: solver produced an improper witness");
  }
  return res;
}

std::uint64_t count_colorings(const Hypergraph& h) {
  h.validate();
  if (h.n > 24) {
    throw ResourceError("n <= 24", "count_colorings: n = " + std::to_string(h.n) + " exceeds n <= 24");
  }
  std::vector<std::uint32_t> masks;
  masks.reserve(h.edges.size());
  for (const auto& e : h.edges) {
    std::uint32_t mask = 0;
    for (int v : e) mask |= 1u << v;
    masks.push_back(mask);
  }
  std::sort(masks.begin(), masks.end());
  masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
  std::uint64_t count = 0;
  const std::uint32_t total = h.n == 0 ? 1u : (1u << h.n);
  for (std::uint32_t a = 0; a < total; ++a) {
    bool ok = true;
    for (std::uint32_t mask : masks) {
      const std::uint32_t black = a & mask;
      if (black == 0 || black == mask) {
        ok = false;
        break;
      }
    }
    count += ok;
  }
  return count;
}

}  // namespace threshold_lab
