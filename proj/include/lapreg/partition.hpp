#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lapreg/graph.hpp"
#include "lapreg/sym_matrix.hpp"

namespace lapreg {

struct Cut {
  std::vector<int> side_c;           // x_i >= K
  std::vector<int> side_complement;  // x_i < K
  std::optional<double> conductance;
};

// Conductance is left empty.
Cut sweep_cut(const Eigen::VectorXd& x, double K);
// Same split, with conductance filled in when both sides have positive volume.
Cut sweep_cut(const Graph& g, const Eigen::VectorXd& x, double K);

// cut(S) / min(vol S, vol S^c). Throws DomainError for an empty or full side
// or a zero-volume side.
double conductance(const Graph& g, std::span<const int> side);

// {v : lplus(u, v) > K}, ascending.
std::vector<int> local_partition(const SymMatrix& lplus, int u, double K);

// Lowest-conductance cut over thresholds at every distinct value of x except
// the smallest (so both sides are nonempty).
Cut best_sweep_cut(const Graph& g, const Eigen::VectorXd& x);

}  // namespace lapreg
