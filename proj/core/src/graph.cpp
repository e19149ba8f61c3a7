#include "graphsys/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "graphsys/rng.hpp"

namespace graphsys {

WeightedGraph::WeightedGraph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n_ < 1) throw std::invalid_argument("graph must have at least one vertex");
  for (Edge& e : edges_) {
    if (e.i > e.j) std::swap(e.i, e.j);
    if (e.i < 0 || e.j >= n_) throw std::invalid_argument("edge endpoint out of range");
    if (e.i == e.j) throw std::invalid_argument("self-loops are not allowed");
    if (!(e.w > 0.0) || !std::isfinite(e.w)) {
      throw std::invalid_argument("edge weights must be finite and positive");
    }
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  auto dup = std::adjacent_find(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return a.i == b.i && a.j == b.j;
  });
  if (dup != edges_.end()) throw std::invalid_argument("duplicate edge");
}

bool WeightedGraph::is_connected() const {
  std::vector<std::vector<int>> nbrs(n_);
  for (const Edge& e : edges_) {
    nbrs[e.i].push_back(e.j);
    nbrs[e.j].push_back(e.i);
  }
  std::vector<bool> seen(n_, false);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = true;
  int visited = 1;
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop();
    for (int u : nbrs[v]) {
      if (!seen[u]) {
        seen[u] = true;
        ++visited;
        frontier.push(u);
      }
    }
  }
  return visited == n_;
}

Matrix WeightedGraph::adjacency() const {
  Matrix w = Matrix::Zero(n_, n_);
  for (const Edge& e : edges_) {
    w(e.i, e.j) = e.w;
    w(e.j, e.i) = e.w;
  }
  return w;
}

WeightedGraph WeightedGraph::scaled(double factor) const {
  std::vector<Edge> out = edges_;
  for (Edge& e : out) e.w *= factor;
  return WeightedGraph(n_, std::move(out));
}

CglMatrix CglMatrix::from_matrix(const Matrix& m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument("Laplacian must be a non-empty square matrix");
  }
  if (!m.allFinite()) throw std::invalid_argument("Laplacian has non-finite entries");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double slack = tol * scale;
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > slack) {
    throw std::invalid_argument("Laplacian is not symmetric");
  }
  Matrix out = 0.5 * (m + m.transpose());
  const auto n = out.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    double off_sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      if (out(i, j) > slack) throw std::invalid_argument("Laplacian has a positive off-diagonal entry");
      out(i, j) = std::min(out(i, j), 0.0);
      off_sum += out(i, j);
    }
    if (std::abs(out(i, i) + off_sum) > slack) {
      throw std::invalid_argument("Laplacian row does not sum to zero");
    }
  }
  // Second pass so clamping in later rows cannot leave an asymmetry.
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) out(j, i) = out(i, j);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    double off_sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) off_sum += out(i, j);
    }
    out(i, i) = -off_sum;
  }
  return CglMatrix(std::move(out));
}

CglMatrix CglMatrix::from_edges(int n, const std::vector<Edge>& edges) {
  Matrix l = Matrix::Zero(n, n);
  for (const Edge& e : edges) {
    l(e.i, e.j) -= e.w;
    l(e.j, e.i) -= e.w;
  }
  for (int i = 0; i < n; ++i) {
    double off_sum = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i != j) off_sum += l(i, j);
    }
    l(i, i) = -off_sum;
  }
  return CglMatrix(std::move(l));
}

std::vector<Edge> CglMatrix::edges(double threshold) const {
  std::vector<Edge> out;
  for (int i = 0; i < n(); ++i) {
    for (int j = i + 1; j < n(); ++j) {
      if (-m_(i, j) > threshold) out.push_back({i, j, -m_(i, j)});
    }
  }
  return out;
}

std::string_view to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::grid: return "grid";
    case GraphKind::erdos_renyi: return "erdos_renyi";
    case GraphKind::modular: return "modular";
  }
  return "unknown";
}

GraphKind parse_graph_kind(std::string_view name) {
  if (name == "grid") return GraphKind::grid;
  if (name == "erdos_renyi") return GraphKind::erdos_renyi;
  if (name == "modular") return GraphKind::modular;
  throw std::invalid_argument("unknown graph kind '" + std::string(name) +
                              "' (expected grid, erdos_renyi or modular)");
}

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

int grid_side(int n) {
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  return side * side == n ? side : -1;
}

std::vector<Edge> grid_topology(int n) {
  const int side = grid_side(n);
  std::vector<Edge> edges;
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      const int v = r * side + c;
      if (c + 1 < side) edges.push_back({v, v + 1, 1.0});
      if (r + 1 < side) edges.push_back({v, v + side, 1.0});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  return edges;
}

int module_of(int v, int n, int modules) {
  const int size = n / modules;
  return std::min(v / size, modules - 1);
}

std::vector<Edge> random_topology(const GraphModelSpec& spec, Rng& rng) {
  std::vector<Edge> edges;
  for (int i = 0; i < spec.n; ++i) {
    for (int j = i + 1; j < spec.n; ++j) {
      double p = spec.p;
      if (spec.kind == GraphKind::modular) {
        const bool same = module_of(i, spec.n, spec.module_count) ==
                          module_of(j, spec.n, spec.module_count);
        p = same ? spec.p2 : spec.p1;
      }
      if (rng.uniform() < p) edges.push_back({i, j, 1.0});
    }
  }
  return edges;
}

bool topology_connected(int n, const std::vector<Edge>& edges) {
  return WeightedGraph(n, edges).is_connected();
}

}  // namespace

void GraphModelSpec::validate() const {
  if (n < 2) throw std::invalid_argument("graph model requires n >= 2");
  if (kind == GraphKind::grid && grid_side(n) < 0) {
    throw std::invalid_argument("grid graph requires n to be a perfect square, got n = " +
                                std::to_string(n));
  }
  if (!is_probability(p) || !is_probability(p1) || !is_probability(p2)) {
    throw std::invalid_argument("attachment probabilities must lie in [0, 1]");
  }
  if (kind == GraphKind::modular && (module_count < 1 || module_count > n)) {
    throw std::invalid_argument("modular graph requires 1 <= module_count <= n");
  }
  if (!(weight_low > 0.0)) throw std::invalid_argument("weight_low must be positive");
  if (!(weight_high >= weight_low)) throw std::invalid_argument("weight_high must be >= weight_low");
}

CglMatrix build_cgl(const WeightedGraph& g) {
  if (!g.is_connected()) throw std::invalid_argument("graph is disconnected");
  return CglMatrix::from_edges(g.n(), g.edges());
}

WeightedGraph generate_graph(const GraphModelSpec& spec) {
  spec.validate();
  for (int attempt = 0; attempt < kMaxConnectivityRetries; ++attempt) {
    Rng rng = substream(spec.seed, static_cast<std::uint64_t>(attempt));
    std::vector<Edge> edges = spec.kind == GraphKind::grid ? grid_topology(spec.n)
                                                            : random_topology(spec, rng);
    if (!topology_connected(spec.n, edges)) continue;
    for (Edge& e : edges) e.w = rng.uniform(spec.weight_low, spec.weight_high);
    return WeightedGraph(spec.n, std::move(edges));
  }
  throw std::runtime_error("no connected graph after " + std::to_string(kMaxConnectivityRetries) +
                           " attempts; attachment probabilities too small for n = " +
                           std::to_string(spec.n));
}

double quadratic_form(const CglMatrix& L, const Vector& x) {
  if (x.size() != L.n()) throw std::invalid_argument("quadratic_form: dimension mismatch");
  return x.dot(L.matrix() * x);
}

}  // namespace graphsys
