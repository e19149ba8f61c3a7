#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "graphsys/types.hpp"

namespace graphsys {

struct Edge {
  int i = 0;
  int j = 0;
  double w = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Simple undirected graph with strictly positive edge weights. Edges are kept
/// in lexicographic (i, j) order with i < j.
class WeightedGraph {
 public:
  /// Throws std::invalid_argument on out-of-range or self-loop endpoints,
  /// duplicate pairs, or non-positive weights. Pairs given as (j, i) are
  /// normalized to (i, j).
  WeightedGraph(int n, std::vector<Edge> edges);

  int n() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }

  bool is_connected() const;

  /// Dense symmetric adjacency matrix W.
  Matrix adjacency() const;

  /// Copy with every weight multiplied by `factor` (> 0).
  WeightedGraph scaled(double factor) const;

  friend bool operator==(const WeightedGraph&, const WeightedGraph&) = default;

 private:
  int n_;
  std::vector<Edge> edges_;
};

/// Combinatorial graph Laplacian: symmetric, off-diagonals <= 0, zero row
/// sums. The class only holds matrices that passed the structural check.
class CglMatrix {
 public:
  /// Validates symmetry, sign pattern and row sums to `tol` relative to the
  /// largest entry. The stored matrix is symmetrized and its diagonal reset
  /// to the negated off-diagonal row sums, so the invariants hold exactly.
  static CglMatrix from_matrix(const Matrix& m, double tol = 1e-10);

  /// Builds L = sum_e w_e (e_i - e_j)(e_i - e_j)^T. No connectivity check.
  static CglMatrix from_edges(int n, const std::vector<Edge>& edges);

  int n() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  /// Edges with -L(i, j) > threshold.
  std::vector<Edge> edges(double threshold = 0.0) const;

 private:
  explicit CglMatrix(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

enum class GraphKind { grid, erdos_renyi, modular };

std::string_view to_string(GraphKind kind);
GraphKind parse_graph_kind(std::string_view name);

struct GraphModelSpec {
  GraphKind kind = GraphKind::erdos_renyi;
  int n = 36;
  double p = 0.2;   // Erdos-Renyi attachment probability
  double p1 = 0.1;  // modular: across modules
  double p2 = 0.2;  // modular: within a module
  int module_count = 4;
  double weight_low = 0.1;
  double weight_high = 3.0;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument naming the violated constraint.
  void validate() const;
};

/// L = D - W. Throws std::invalid_argument if the graph is disconnected.
CglMatrix build_cgl(const WeightedGraph& g);

/// Random connected graph for the given model. Topology attempt `a` draws
/// from substream `a` of spec.seed; the weights of the accepted topology are
/// drawn from the same stream in edge order. Throws std::runtime_error after
/// kMaxConnectivityRetries disconnected draws.
WeightedGraph generate_graph(const GraphModelSpec& spec);

inline constexpr int kMaxConnectivityRetries = 1000;

/// x^T L x.
double quadratic_form(const CglMatrix& L, const Vector& x);

}  // namespace graphsys
