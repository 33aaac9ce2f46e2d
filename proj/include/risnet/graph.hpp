#pragma once

// Weighted-graph spectral core: Laplacian assembly, algebraic connectivity
// (Fiedler value/vector), vertex reliability, and the first-order eigenvalue
// sensitivity of lambda2 to an edge weight. Dense solvers only; graphs at
// this scale have a few dozen vertices.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace risnet {

// Gap threshold below which lambda2 is treated as a repeated eigenvalue.
inline constexpr double kSimpleGapTol = 1e-8;

enum class EdgeKind { d2d, ris_aided };

struct Edge {
  int u = 0;
  int v = 0;
  double weight = 0.0;
  EdgeKind kind = EdgeKind::d2d;
};

// Undirected weighted graph on vertices [0, V). A vertex pair may carry at
// most one edge of each kind; both kinds enter the Laplacian identically.
class NetworkGraph {
 public:
  explicit NetworkGraph(int vertex_count) : vertex_count_(vertex_count) {
    if (vertex_count <= 0)
      throw std::invalid_argument("NetworkGraph: vertex count must be positive");
  }

  int vertex_count() const { return vertex_count_; }
  const std::vector<Edge>& edges() const { return edges_; }

  void add_edge(int u, int v, double weight, EdgeKind kind) {
    if (u == v) throw std::invalid_argument("NetworkGraph: self-loop rejected");
    if (u < 0 || v < 0 || u >= vertex_count_ || v >= vertex_count_)
      throw std::invalid_argument("NetworkGraph: vertex id out of range");
    if (!(weight >= 0.0) || !std::isfinite(weight))
      throw std::invalid_argument("NetworkGraph: weight must be finite and nonnegative");
    if (find_edge(u, v, kind) != nullptr)
      throw std::invalid_argument("NetworkGraph: duplicate edge for this kind");
    edges_.push_back({std::min(u, v), std::max(u, v), weight, kind});
  }

  const Edge* find_edge(int u, int v, EdgeKind kind) const {
    const int a = std::min(u, v), b = std::max(u, v);
    for (const Edge& e : edges_)
      if (e.u == a && e.v == b && e.kind == kind) return &e;
    return nullptr;
  }

  bool has_edge(int u, int v) const {
    const int a = std::min(u, v), b = std::max(u, v);
    for (const Edge& e : edges_)
      if (e.u == a && e.v == b) return true;
    return false;
  }

  // Total weight between u and v summed over kinds.
  double total_weight(int u, int v) const {
    const int a = std::min(u, v), b = std::max(u, v);
    double w = 0.0;
    for (const Edge& e : edges_)
      if (e.u == a && e.v == b) w += e.weight;
    return w;
  }

  // Copy with vertex v and its incident edges removed; ids above v shift
  // down by one.
  NetworkGraph without_vertex(int v) const {
    if (v < 0 || v >= vertex_count_)
      throw std::invalid_argument("NetworkGraph: vertex id out of range");
    if (vertex_count_ < 2)
      throw std::invalid_argument("NetworkGraph: cannot delete the only vertex");
    NetworkGraph out(vertex_count_ - 1);
    for (const Edge& e : edges_) {
      if (e.u == v || e.v == v) continue;
      const int u2 = e.u > v ? e.u - 1 : e.u;
      const int v2 = e.v > v ? e.v - 1 : e.v;
      out.add_edge(u2, v2, e.weight, e.kind);
    }
    return out;
  }

 private:
  int vertex_count_;
  std::vector<Edge> edges_;
};

struct Laplacian {
  Eigen::MatrixXd matrix;
};

// Fiedler pair. `vector` is unit norm, exactly orthogonal to the all-ones
// vector, and sign-fixed so its first entry above 1e-9 in magnitude is
// positive. `simple` is false when lambda3 - lambda2 <= kSimpleGapTol.
struct FiedlerResult {
  double lambda2 = 0.0;
  Eigen::VectorXd vector;
  bool simple = true;
};

struct ReliabilityMap {
  std::vector<double> values;  // per-vertex lambda2 of the deleted subgraph
};

inline Laplacian build_laplacian(const NetworkGraph& g) {
  const int n = g.vertex_count();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    m(e.u, e.u) += e.weight;
    m(e.v, e.v) += e.weight;
    m(e.u, e.v) -= e.weight;
    m(e.v, e.u) -= e.weight;
  }
  return {std::move(m)};
}

namespace detail {

inline void check_laplacian(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("Laplacian: matrix must be square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw std::invalid_argument("Laplacian: matrix must be symmetric");
  if ((m.rowwise().sum()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw std::invalid_argument("Laplacian: row sums must vanish");
}

// Connectivity of the graph underlying L (nonzero off-diagonals are edges).
// Used to pin lambda2 of disconnected graphs to exactly zero, below any
// eigensolver noise.
inline bool laplacian_connected(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w = 0; w < n; ++w) {
      if (w == v || seen[static_cast<std::size_t>(w)] || m(v, w) == 0.0) continue;
      seen[static_cast<std::size_t>(w)] = 1;
      ++reached;
      stack.push_back(w);
    }
  }
  return reached == n;
}

// Orthonormal basis of the complement of the all-ones direction, taken from
// the trailing columns of the Householder reflector mapping ones/sqrt(n)
// onto e0.
inline Eigen::MatrixXd ones_complement_basis(int n) {
  Eigen::VectorXd u = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n)));
  Eigen::VectorXd w = u;
  w(0) -= 1.0;
  Eigen::MatrixXd h =
      Eigen::MatrixXd::Identity(n, n) - (2.0 / w.squaredNorm()) * (w * w.transpose());
  return h.rightCols(n - 1);
}

}  // namespace detail

// Second-smallest eigenvalue of L with its eigenvector. Works on the
// complement of the all-ones nullspace direction, so disconnected graphs
// yield lambda2 = 0 with a well-defined unit vector orthogonal to ones.
inline FiedlerResult algebraic_connectivity(const Laplacian& lap) {
  const int n = static_cast<int>(lap.matrix.rows());
  if (n < 2)
    throw std::invalid_argument("algebraic_connectivity: need at least 2 vertices");
  detail::check_laplacian(lap.matrix);

  const Eigen::MatrixXd q = detail::ones_complement_basis(n);
  Eigen::MatrixXd b = q.transpose() * lap.matrix * q;
  b = 0.5 * (b + b.transpose());  // strip asymmetry from roundoff

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("algebraic_connectivity: eigensolver failed");

  FiedlerResult out;
  out.lambda2 = std::max(0.0, es.eigenvalues()(0));
  // A disconnected graph has lambda2 exactly zero; the eigensolver's noise
  // floor scales with the weights, so pin it combinatorially.
  if (!detail::laplacian_connected(lap.matrix)) out.lambda2 = 0.0;
  out.vector = q * es.eigenvectors().col(0);
  out.vector.normalize();
  out.simple = (n == 2) || (es.eigenvalues()(1) - es.eigenvalues()(0) > kSimpleGapTol);

  for (int i = 0; i < n; ++i) {
    if (std::abs(out.vector(i)) > 1e-9) {
      if (out.vector(i) < 0.0) out.vector = -out.vector;
      break;
    }
  }
  return out;
}

inline FiedlerResult algebraic_connectivity(const NetworkGraph& g) {
  return algebraic_connectivity(build_laplacian(g));
}

// Reliability of each vertex: lambda2 of the graph with that vertex deleted.
// Zero marks a vertex whose removal disconnects the remainder.
inline ReliabilityMap node_reliability(const NetworkGraph& g) {
  const int n = g.vertex_count();
  if (n < 3)
    throw std::invalid_argument("node_reliability: need at least 3 vertices");
  ReliabilityMap out;
  out.values.reserve(n);
  for (int v = 0; v < n; ++v)
    out.values.push_back(algebraic_connectivity(g.without_vertex(v)).lambda2);
  return out;
}

// First-order sensitivity d(lambda2)/dw for the weight of pair (u, v):
// (v_u - v_v)^2 with v the Fiedler vector. Undefined (nullopt) when lambda2
// is not simple; callers fall back to finite differences.
inline std::optional<double> lambda2_weight_gradient(const NetworkGraph& g, int u, int v) {
  if (u == v) throw std::invalid_argument("lambda2_weight_gradient: u == v");
  if (u < 0 || v < 0 || u >= g.vertex_count() || v >= g.vertex_count())
    throw std::invalid_argument("lambda2_weight_gradient: vertex id out of range");
  const FiedlerResult f = algebraic_connectivity(g);
  if (!f.simple) return std::nullopt;
  const double d = f.vector(u) - f.vector(v);
  return d * d;
}

}  // namespace risnet
