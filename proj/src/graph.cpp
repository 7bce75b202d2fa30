#include "lapreg/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>

#include "lapreg/errors.hpp"

namespace lapreg {
namespace {

std::uint64_t pair_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

}  // namespace

Graph::Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n < 0) throw ParameterError("Graph: negative node count");
  degrees_ = Eigen::VectorXd::Zero(n);
  for (const Edge& e : edges_) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) {
      throw ParameterError("Graph: edge endpoint out of range");
    }
    if (!std::isfinite(e.weight) || e.weight < 0.0) {
      throw ParameterError("Graph: edge weights must be finite and nonnegative");
    }
    degrees_(e.u) += e.weight;
    if (e.v != e.u) degrees_(e.v) += e.weight;
  }
}

Eigen::MatrixXd Graph::adjacency() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
  for (const Edge& e : edges_) {
    a(e.u, e.v) += e.weight;
    if (e.u != e.v) a(e.v, e.u) += e.weight;
  }
  return a;
}

bool Graph::is_simple() const {
  std::unordered_set<std::uint64_t> seen;
  for (const Edge& e : edges_) {
    if (e.u == e.v) return false;
    if (!seen.insert(pair_key(e.u, e.v)).second) return false;
  }
  return true;
}

bool Graph::has_unit_weights() const {
  return std::all_of(edges_.begin(), edges_.end(),
                     [](const Edge& e) { return e.weight == 1.0; });
}

bool Graph::is_connected() const {
  if (n_ == 0) return true;
  std::vector<int> parent(n_);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int components = n_;
  for (const Edge& e : edges_) {
    if (e.weight <= 0.0) continue;
    int a = find(e.u), b = find(e.v);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

Graph generate_lattice(int width, int height) {
  if (width < 2 || height < 2) {
    throw ParameterError("generate_lattice: width and height must be >= 2");
  }
  std::vector<Edge> edges;
  edges.reserve(2 * width * height - width - height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const int i = y * width + x;
      if (x + 1 < width) edges.push_back({i, i + 1, 1.0});
      if (y + 1 < height) edges.push_back({i, i + width, 1.0});
    }
  }
  return Graph(width * height, std::move(edges));
}

Graph edge_swap(const Graph& g, std::int64_t swaps, Rng& rng) {
  if (swaps < 0) throw ParameterError("edge_swap: swap count must be >= 0");
  if (!g.is_simple() || !g.has_unit_weights()) {
    throw ParameterError("edge_swap: graph must be simple with unit weights");
  }
  if (swaps == 0) return g;
  if (g.num_edges() < 2) throw ParameterError("edge_swap: need at least two edges");

  std::vector<Edge> edges = g.edges();
  std::unordered_set<std::uint64_t> present;
  present.reserve(edges.size() * 2);
  for (const Edge& e : edges) present.insert(pair_key(e.u, e.v));

  constexpr std::int64_t kMaxConsecutiveRejections = 1'000'000;
  std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
  std::int64_t accepted = 0;
  std::int64_t rejected_in_a_row = 0;
  while (accepted < swaps) {
    const std::size_t a = pick(rng);
    std::size_t b = pick(rng);
    while (b == a) b = pick(rng);
    const int i1 = edges[a].u, j1 = edges[a].v;
    const int i2 = edges[b].u, j2 = edges[b].v;
    const bool self_loop = i1 == j2 || i2 == j1;
    if (self_loop || present.count(pair_key(i1, j2)) ||
        present.count(pair_key(i2, j1))) {
      if (++rejected_in_a_row >= kMaxConsecutiveRejections) {
        throw ConvergenceError("edge_swap: no admissible swap found",
                               static_cast<double>(rejected_in_a_row));
      }
      continue;
    }
    rejected_in_a_row = 0;
    present.erase(pair_key(i1, j1));
    present.erase(pair_key(i2, j2));
    edges[a] = {i1, j2, 1.0};
    edges[b] = {i2, j1, 1.0};
    present.insert(pair_key(i1, j2));
    present.insert(pair_key(i2, j1));
    ++accepted;
  }
  return Graph(g.num_nodes(), std::move(edges));
}

SymMatrix combinatorial_laplacian(const Graph& g) {
  const Eigen::MatrixXd a = g.adjacency();
  Eigen::MatrixXd l = -a;
  for (int u = 0; u < g.num_nodes(); ++u) l(u, u) = g.degree(u) - a(u, u);
  return SymMatrix(l);
}

SymMatrix normalized_laplacian(const Graph& g, ZeroDegree policy) {
  const int n = g.num_nodes();
  Eigen::VectorXd inv_sqrt(n);
  for (int u = 0; u < n; ++u) {
    const double d = g.degree(u);
    if (d > 0.0) {
      inv_sqrt(u) = 1.0 / std::sqrt(d);
    } else if (policy == ZeroDegree::kZeroRow) {
      inv_sqrt(u) = 0.0;
    } else {
      throw DomainError("normalized_laplacian: node " + std::to_string(u) +
                        " has zero degree");
    }
  }
  const Eigen::MatrixXd l0 = combinatorial_laplacian(g).matrix();
  return SymMatrix(inv_sqrt.asDiagonal() * l0 * inv_sqrt.asDiagonal());
}

Eigen::VectorXd sqrt_degrees(const Graph& g) { return g.degrees().cwiseSqrt(); }

void write_edge_list(std::ostream& out, const Graph& g) {
  char buf[96];
  for (const Edge& e : g.edges()) {
    std::snprintf(buf, sizeof buf, "%d %d %.17g\n", e.u, e.v, e.weight);
    out << buf;
  }
}

Graph read_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  int max_id = -1;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    Edge e;
    if (!(fields >> e.u)) continue;  // blank or comment-only
    std::string rest;
    if (!(fields >> e.v >> e.weight) || (fields >> rest)) {
      throw ParameterError("edge list line " + std::to_string(line_no) +
                           ": expected 'u v weight'");
    }
    if (e.u < 0 || e.v < 0) {
      throw ParameterError("edge list line " + std::to_string(line_no) +
                           ": negative node id");
    }
    max_id = std::max({max_id, e.u, e.v});
    edges.push_back(e);
  }
  return Graph(max_id + 1, std::move(edges));
}

}  // namespace lapreg
