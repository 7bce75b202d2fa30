#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "lapreg/graph.hpp"
#include "lapreg/rng.hpp"
#include "lapreg/sym_matrix.hpp"

namespace lapreg::testing {

inline Graph path_graph(int n) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1, 1.0});
  return Graph(n, e);
}

inline Graph complete_graph(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.push_back({i, j, 1.0});
  return Graph(n, e);
}

inline Graph cycle_graph(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n, 1.0});
  return Graph(n, e);
}

// Random spanning tree plus extra edges with probability p_extra; weights in
// [0.5, 2] when `weighted`, else 1.
inline Graph random_connected_graph(int n, Rng& rng, double p_extra = 0.3,
                                    bool weighted = true) {
  std::uniform_real_distribution<double> w(0.5, 2.0), u(0.0, 1.0);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<char>> has(n, std::vector<char>(n, 0));
  std::vector<Edge> e;
  auto add = [&](int a, int b) {
    if (a == b || has[a][b]) return;
    has[a][b] = has[b][a] = 1;
    e.push_back({std::min(a, b), std::max(a, b), weighted ? w(rng) : 1.0});
  };
  for (int i = 1; i < n; ++i) {
    std::uniform_int_distribution<int> pick(0, i - 1);
    add(order[i], order[pick(rng)]);
  }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (u(rng) < p_extra) add(a, b);
  return Graph(n, e);
}

// Random PSD matrix of the given order and rank.
inline SymMatrix random_psd(int n, int rank, Rng& rng) {
  std::normal_distribution<double> z(0.0, 1.0);
  Eigen::MatrixXd b(n, rank);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < rank; ++j) b(i, j) = z(rng);
  return SymMatrix(b * b.transpose());
}

inline double max_abs(const Eigen::MatrixXd& a) { return a.cwiseAbs().maxCoeff(); }

}  // namespace lapreg::testing
