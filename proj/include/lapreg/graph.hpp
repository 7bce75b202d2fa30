#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "lapreg/rng.hpp"
#include "lapreg/sym_matrix.hpp"

namespace lapreg {

struct Edge {
  int u = 0;
  int v = 0;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Weighted undirected graph on nodes 0..n-1, stored as an edge list. Each
// listed edge contributes w to both A(u,v) and A(v,u); a self-loop (u,u)
// contributes w once to A(u,u). Repeated pairs accumulate.
class Graph {
 public:
  Graph() = default;
  Graph(int n, std::vector<Edge> edges);

  int num_nodes() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  // d(u) = sum_v w(u,v).
  const Eigen::VectorXd& degrees() const { return degrees_; }
  double degree(int u) const { return degrees_(u); }

  Eigen::MatrixXd adjacency() const;

  // No self-loops and no repeated node pairs.
  bool is_simple() const;
  bool has_unit_weights() const;
  bool is_connected() const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  Eigen::VectorXd degrees_;
};

// w x h grid, node (x, y) has id y*w + x, unit-weight edges to the four
// nearest neighbours. Edges are listed with the smaller id first.
Graph generate_lattice(int width, int height);

// Performs exactly `swaps` accepted degree-preserving swaps. A proposal picks
// two distinct edges (i1,j1), (i2,j2) uniformly and replaces them with
// (i1,j2), (i2,j1); proposals that would create a self-loop or a repeated
// pair are discarded and redrawn. Throws ConvergenceError after 10^6
// consecutive rejections (graphs where no valid swap exists).
Graph edge_swap(const Graph& g, std::int64_t swaps, Rng& rng);

SymMatrix combinatorial_laplacian(const Graph& g);

enum class ZeroDegree {
  kError,    // throw DomainError
  kZeroRow,  // D^{-1/2} taken as 0 on isolated nodes; their rows/cols vanish
};

// D^{-1/2} L0 D^{-1/2}.
SymMatrix normalized_laplacian(const Graph& g,
                               ZeroDegree policy = ZeroDegree::kError);

// D^{1/2} 1, the trivial eigenvector of the normalized Laplacian.
Eigen::VectorXd sqrt_degrees(const Graph& g);

// Edge-list text format: one "u v weight" triple per line, 0-based ids,
// '#' starts a comment. The node count is the largest id plus one.
void write_edge_list(std::ostream& out, const Graph& g);
Graph read_edge_list(std::istream& in);

}  // namespace lapreg
