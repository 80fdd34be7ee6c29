#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "gfb/errors.hpp"

namespace gfb {

using Edge = std::pair<int, int>;  // (i, j) with 1 <= i < j <= n
using EdgeList = std::vector<Edge>;

// Directed graph on nodes 1..n whose edges all point forward (i < j), so the
// graph is oriented by construction. The edge list is kept sorted
// lexicographically; instances are immutable after construction.
class AlgorithmicGraph {
 public:
  // Validates and canonicalizes the edge list. Connectivity of the underlying
  // undirected graph is always computed, but only enforced when
  // `require_connected` is set.
  static AlgorithmicGraph build(int n, EdgeList edges, bool require_connected = false);

  static AlgorithmicGraph sequential(int n);
  static AlgorithmicGraph ring(int n);  // n >= 3
  static AlgorithmicGraph parallel_up(int n);
  static AlgorithmicGraph parallel_down(int n);
  static AlgorithmicGraph complete(int n);
  static AlgorithmicGraph biparallel(int n);  // parallel_up plus parallel_down, n >= 3

  int order() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const EdgeList& edges() const { return edges_; }
  bool connected() const { return connected_; }
  bool has_edge(int i, int j) const;
  bool is_tree() const { return connected_ && edge_count() == n_ - 1; }
  bool is_complete() const { return 2 * edge_count() == n_ * (n_ - 1); }

  // Empty placeholder; only assignable. Use build() or a named shape.
  AlgorithmicGraph() = default;

  int in_degree(int node) const { return static_cast<int>(in_[node - 1].size()); }
  int out_degree(int node) const { return static_cast<int>(out_[node - 1].size()); }
  int degree(int node) const { return in_degree(node) + out_degree(node); }
  // Sources h of the edges (h, node); sorted ascending.
  const std::vector<int>& in_neighbors(int node) const { return in_[node - 1]; }

 private:
  int n_ = 0;
  EdgeList edges_;
  bool connected_ = false;
  std::vector<std::vector<int>> in_;
  std::vector<std::vector<int>> out_;
};

// Integer structure matrices of an algorithmic graph. Edges are indexed by
// their position in the canonical (sorted) edge list.
struct GraphMatrices {
  Eigen::MatrixXi adjacency;  // n x n
  Eigen::MatrixXi degree;     // n x n diagonal
  Eigen::MatrixXi incidence;  // n x E, +1 leaves / -1 enters
  Eigen::MatrixXi laplacian;  // Deg - Adj - Adj^T
  Eigen::MatrixXi p;          // Deg - 2 Adj^T
  Eigen::MatrixXi q;          // Adj - Adj^T
};

GraphMatrices structure_matrices(const AlgorithmicGraph& g);

// Closed-form onto decomposition of the complete graph's Laplacian:
// Z_ii = sqrt((n-i)n/(n-i+1)), Z_ij = -sqrt(n/((n-j)(n-j+1))) for i > j.
Eigen::MatrixXd complete_graph_z(int n);

// Canonical onto decomposition Z (n x (n-1)) with Z Z^T = Lap(gp),
// rank Z = n-1 and Z^T 1 = 0. Selection rule: complete graph -> closed form;
// tree -> incidence matrix; otherwise spectral factorization with eigenvalues
// sorted descending, each eigenvector's sign fixed so its first entry of
// magnitude > 1e-12 is positive, and ties between equal eigenvalues broken by
// lexicographic order of the sign-fixed eigenvectors.
Eigen::MatrixXd onto_decomposition(const AlgorithmicGraph& gp);

// Predecessor map of a spanning subgraph in which every node i >= 2 has
// in-degree exactly one. Returned vector is node-indexed with size n+1;
// entries 0 and 1 are unused (zero).
std::vector<int> predecessor_map(const EdgeList& gpp_edges, int n);

// Subgraph of g on the same nodes with edge set E(g) \ E(gp).
AlgorithmicGraph complement_subgraph(const AlgorithmicGraph& g, const AlgorithmicGraph& gp);

// Second-smallest eigenvalue of the Laplacian.
double algebraic_connectivity(const AlgorithmicGraph& g);

enum class PresetKind {
  ring,
  sequential,
  parallel,
  complete_seq,
  complete_par,
  davis_yin,
  biparallel_limit,
  four_op_1,  // complete(3) / parallel_down / p(3) = 1
  four_op_2,  // complete(3) / parallel_down / p(3) = 2
};

PresetKind parse_preset(const std::string& name);
std::string preset_name(PresetKind kind);
bool preset_supports(PresetKind kind, int n);

// Graph triple (G, G', G'') with the derived quantities used by the solver:
// canonical onto decomposition Z of Lap(G'), the predecessor map of G'' and
// the degrees of G. Immutable after construction.
struct GraphTriple {
  AlgorithmicGraph g;    // algorithmic graph, connected
  AlgorithmicGraph gp;   // connected spanning subgraph of g
  EdgeList gpp_edges;    // spanning subgraph of g, in-degree 1 for i >= 2
  std::vector<int> p;    // node-indexed predecessor map (size n+1)
  Eigen::MatrixXd z;     // n x (n-1)
  std::vector<int> degrees;  // degrees[i-1] = d_i in g

  static GraphTriple make(AlgorithmicGraph g, AlgorithmicGraph gp, EdgeList gpp_edges);

  int order() const { return g.order(); }
  int degree(int node) const { return degrees[node - 1]; }
};

GraphTriple preset_triple(PresetKind kind, int n);

}  // namespace gfb
