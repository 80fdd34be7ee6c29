#include "gfb/graph.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace gfb {

namespace {

bool undirected_connected(int n, const EdgeList& edges) {
  if (n <= 1) return true;
  // union-find
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };
  int components = n;
  for (const auto& [i, j] : edges) {
    const int ri = find(i - 1), rj = find(j - 1);
    if (ri != rj) {
      parent[ri] = rj;
      --components;
    }
  }
  return components == 1;
}

}  // namespace

AlgorithmicGraph AlgorithmicGraph::build(int n, EdgeList edges, bool require_connected) {
  if (n < 2) throw UnsupportedOrder("graph order must be >= 2, got " + std::to_string(n));
  for (const auto& [i, j] : edges) {
    if (i < 1 || i > n || j < 1 || j > n)
      throw NodeOutOfRange("edge (" + std::to_string(i) + "," + std::to_string(j) +
                           ") out of range 1.." + std::to_string(n));
    if (i >= j)
      throw EdgeOrderViolation("edge (" + std::to_string(i) + "," + std::to_string(j) +
                               ") violates i < j");
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw DuplicateEdge("duplicate edge in list");

  AlgorithmicGraph g;
  g.n_ = n;
  g.edges_ = std::move(edges);
  g.connected_ = undirected_connected(n, g.edges_);
  if (require_connected && !g.connected_)
    throw NotConnected("graph of order " + std::to_string(n) + " is not connected");
  g.in_.resize(n);
  g.out_.resize(n);
  for (const auto& [i, j] : g.edges_) {
    g.out_[i - 1].push_back(j);
    g.in_[j - 1].push_back(i);
  }
  return g;
}

bool AlgorithmicGraph::has_edge(int i, int j) const {
  return std::binary_search(edges_.begin(), edges_.end(), Edge{i, j});
}

AlgorithmicGraph AlgorithmicGraph::sequential(int n) {
  EdgeList e;
  for (int i = 1; i < n; ++i) e.emplace_back(i, i + 1);
  return build(n, std::move(e), true);
}

AlgorithmicGraph AlgorithmicGraph::ring(int n) {
  if (n < 3) throw UnsupportedOrder("ring graph needs n >= 3 (a 2-cycle is not oriented)");
  EdgeList e;
  for (int i = 1; i < n; ++i) e.emplace_back(i, i + 1);
  e.emplace_back(1, n);
  return build(n, std::move(e), true);
}

AlgorithmicGraph AlgorithmicGraph::parallel_up(int n) {
  EdgeList e;
  for (int j = 2; j <= n; ++j) e.emplace_back(1, j);
  return build(n, std::move(e), true);
}

AlgorithmicGraph AlgorithmicGraph::parallel_down(int n) {
  EdgeList e;
  for (int i = 1; i < n; ++i) e.emplace_back(i, n);
  return build(n, std::move(e), true);
}

AlgorithmicGraph AlgorithmicGraph::complete(int n) {
  EdgeList e;
  for (int i = 1; i < n; ++i)
    for (int j = i + 1; j <= n; ++j) e.emplace_back(i, j);
  return build(n, std::move(e), true);
}

AlgorithmicGraph AlgorithmicGraph::biparallel(int n) {
  if (n < 3) throw UnsupportedOrder("biparallel graph needs n >= 3");
  std::set<Edge> e;
  for (int j = 2; j <= n; ++j) e.insert({1, j});
  for (int i = 1; i < n; ++i) e.insert({i, n});
  return build(n, EdgeList(e.begin(), e.end()), true);
}

GraphMatrices structure_matrices(const AlgorithmicGraph& g) {
  const int n = g.order();
  const int m = g.edge_count();
  GraphMatrices s;
  s.adjacency = Eigen::MatrixXi::Zero(n, n);
  s.degree = Eigen::MatrixXi::Zero(n, n);
  s.incidence = Eigen::MatrixXi::Zero(n, m);
  for (int e = 0; e < m; ++e) {
    const auto& [i, j] = g.edges()[e];
    s.adjacency(i - 1, j - 1) = 1;
    s.incidence(i - 1, e) = 1;
    s.incidence(j - 1, e) = -1;
  }
  for (int i = 1; i <= n; ++i) s.degree(i - 1, i - 1) = g.degree(i);
  s.laplacian = s.degree - s.adjacency - s.adjacency.transpose();
  s.p = s.degree - 2 * s.adjacency.transpose();
  s.q = s.adjacency - s.adjacency.transpose();
  return s;
}

Eigen::MatrixXd complete_graph_z(int n) {
  if (n < 2) throw OrderTooSmall("complete graph decomposition needs n >= 2");
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n, n - 1);
  for (int j = 1; j <= n - 1; ++j) {
    const double a = std::sqrt(static_cast<double>(n - j) * n / (n - j + 1));
    const double t = -std::sqrt(static_cast<double>(n) / ((n - j) * (n - j + 1)));
    z(j - 1, j - 1) = a;
    for (int i = j + 1; i <= n; ++i) z(i - 1, j - 1) = t;
  }
  return z;
}

namespace {

// Columns of the spectral factor, ordered by descending eigenvalue with a
// deterministic sign and tie rule (see header).
Eigen::MatrixXd spectral_z(const Eigen::MatrixXd& lap) {
  const int n = static_cast<int>(lap.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lap);
  std::vector<double> evals(n);
  std::vector<Eigen::VectorXd> evecs(n);
  for (int i = 0; i < n; ++i) {
    // reverse: descending eigenvalues
    evals[i] = es.eigenvalues()(n - 1 - i);
    Eigen::VectorXd v = es.eigenvectors().col(n - 1 - i);
    for (int r = 0; r < n; ++r) {
      if (std::abs(v(r)) > 1e-12) {
        if (v(r) < 0) v = -v;
        break;
      }
    }
    evecs[i] = v;
  }
  // stable lexicographic order within groups of (numerically) equal eigenvalues
  for (int lo = 0; lo < n - 1;) {
    int hi = lo + 1;
    while (hi < n - 1 && std::abs(evals[hi] - evals[lo]) <= 1e-9 * std::max(1.0, evals[lo])) ++hi;
    std::sort(evecs.begin() + lo, evecs.begin() + hi,
              [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
                return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                                    b.data() + b.size());
              });
    lo = hi;
  }
  Eigen::MatrixXd z(n, n - 1);
  for (int i = 0; i < n - 1; ++i) z.col(i) = evecs[i] * std::sqrt(std::max(evals[i], 0.0));
  return z;
}

}  // namespace

Eigen::MatrixXd onto_decomposition(const AlgorithmicGraph& gp) {
  if (!gp.connected()) throw NotConnected("onto decomposition needs a connected graph");
  if (gp.is_complete()) return complete_graph_z(gp.order());
  if (gp.is_tree()) return structure_matrices(gp).incidence.cast<double>();
  return spectral_z(structure_matrices(gp).laplacian.cast<double>());
}

std::vector<int> predecessor_map(const EdgeList& gpp_edges, int n) {
  std::vector<int> p(n + 1, 0);
  for (const auto& [i, j] : gpp_edges) {
    if (i < 1 || j < 1 || i > n || j > n) throw NodeOutOfRange("edge node out of range");
    if (i >= j) throw EdgeOrderViolation("edge violates i < j");
    if (p[j] != 0)
      throw InDegreeViolation("node " + std::to_string(j) + " has more than one in-edge");
    p[j] = i;
  }
  for (int j = 2; j <= n; ++j)
    if (p[j] == 0) throw InDegreeViolation("node " + std::to_string(j) + " has no in-edge");
  return p;
}

AlgorithmicGraph complement_subgraph(const AlgorithmicGraph& g, const AlgorithmicGraph& gp) {
  if (g.order() != gp.order()) throw NotASubgraph("node sets differ");
  EdgeList rest;
  for (const auto& e : gp.edges())
    if (!g.has_edge(e.first, e.second)) throw NotASubgraph("edge of subgraph not in graph");
  for (const auto& e : g.edges())
    if (!gp.has_edge(e.first, e.second)) rest.push_back(e);
  return AlgorithmicGraph::build(g.order(), std::move(rest), false);
}

double algebraic_connectivity(const AlgorithmicGraph& g) {
  if (!g.connected()) throw NotConnected("algebraic connectivity needs a connected graph");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      structure_matrices(g).laplacian.cast<double>(), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(1);
}

PresetKind parse_preset(const std::string& name) {
  if (name == "ring") return PresetKind::ring;
  if (name == "sequential") return PresetKind::sequential;
  if (name == "parallel") return PresetKind::parallel;
  if (name == "complete_seq") return PresetKind::complete_seq;
  if (name == "complete_par") return PresetKind::complete_par;
  if (name == "davis_yin") return PresetKind::davis_yin;
  if (name == "biparallel_limit") return PresetKind::biparallel_limit;
  if (name == "four_op_1") return PresetKind::four_op_1;
  if (name == "four_op_2") return PresetKind::four_op_2;
  throw Error("unknown preset: " + name);
}

std::string preset_name(PresetKind kind) {
  switch (kind) {
    case PresetKind::ring: return "ring";
    case PresetKind::sequential: return "sequential";
    case PresetKind::parallel: return "parallel";
    case PresetKind::complete_seq: return "complete_seq";
    case PresetKind::complete_par: return "complete_par";
    case PresetKind::davis_yin: return "davis_yin";
    case PresetKind::biparallel_limit: return "biparallel_limit";
    case PresetKind::four_op_1: return "four_op_1";
    case PresetKind::four_op_2: return "four_op_2";
  }
  return "?";
}

bool preset_supports(PresetKind kind, int n) {
  switch (kind) {
    case PresetKind::davis_yin: return n == 2;
    case PresetKind::ring:
    case PresetKind::biparallel_limit: return n >= 3;
    case PresetKind::four_op_1:
    case PresetKind::four_op_2: return n == 3;
    default: return n >= 2;
  }
}

GraphTriple GraphTriple::make(AlgorithmicGraph g, AlgorithmicGraph gp, EdgeList gpp_edges) {
  const int n = g.order();
  if (!g.connected()) throw NotConnected("G must be connected");
  if (gp.order() != n) throw NotASubgraph("G' node set differs from G");
  if (!gp.connected()) throw NotConnected("G' must be connected");
  for (const auto& e : gp.edges())
    if (!g.has_edge(e.first, e.second)) throw NotASubgraph("G' is not a subgraph of G");
  for (const auto& e : gpp_edges)
    if (!g.has_edge(e.first, e.second)) throw NotASubgraph("G'' is not a subgraph of G");

  GraphTriple t;
  t.p = predecessor_map(gpp_edges, n);
  t.z = onto_decomposition(gp);
  t.degrees.resize(n);
  for (int i = 1; i <= n; ++i) t.degrees[i - 1] = g.degree(i);
  t.g = std::move(g);
  t.gp = std::move(gp);
  std::sort(gpp_edges.begin(), gpp_edges.end());
  t.gpp_edges = std::move(gpp_edges);
  return t;
}

GraphTriple preset_triple(PresetKind kind, int n) {
  if (!preset_supports(kind, n))
    throw UnsupportedOrder("preset " + preset_name(kind) + " does not support n = " +
                           std::to_string(n));
  auto seq_edges = [](int m) {
    EdgeList e;
    for (int i = 1; i < m; ++i) e.emplace_back(i, i + 1);
    return e;
  };
  auto par_up_edges = [](int m) {
    EdgeList e;
    for (int j = 2; j <= m; ++j) e.emplace_back(1, j);
    return e;
  };
  switch (kind) {
    case PresetKind::ring:
      return GraphTriple::make(AlgorithmicGraph::ring(n), AlgorithmicGraph::sequential(n),
                               seq_edges(n));
    case PresetKind::sequential:
      return GraphTriple::make(AlgorithmicGraph::sequential(n), AlgorithmicGraph::sequential(n),
                               seq_edges(n));
    case PresetKind::parallel:
      return GraphTriple::make(AlgorithmicGraph::parallel_up(n), AlgorithmicGraph::parallel_up(n),
                               par_up_edges(n));
    case PresetKind::complete_seq:
      return GraphTriple::make(AlgorithmicGraph::complete(n), AlgorithmicGraph::complete(n),
                               seq_edges(n));
    case PresetKind::complete_par:
      return GraphTriple::make(AlgorithmicGraph::complete(n), AlgorithmicGraph::complete(n),
                               par_up_edges(n));
    case PresetKind::davis_yin:
      return GraphTriple::make(AlgorithmicGraph::sequential(2), AlgorithmicGraph::sequential(2),
                               {{1, 2}});
    case PresetKind::biparallel_limit:
      return GraphTriple::make(AlgorithmicGraph::biparallel(n),
                               AlgorithmicGraph::parallel_down(n), par_up_edges(n));
    case PresetKind::four_op_1:
      return GraphTriple::make(AlgorithmicGraph::complete(3), AlgorithmicGraph::parallel_down(3),
                               {{1, 2}, {1, 3}});
    case PresetKind::four_op_2:
      return GraphTriple::make(AlgorithmicGraph::complete(3), AlgorithmicGraph::parallel_down(3),
                               {{1, 2}, {2, 3}});
  }
  throw Error("unreachable");
}

}  // namespace gfb
