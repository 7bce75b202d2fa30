#include "lapreg/partition.hpp"

#include <algorithm>
#include <cmath>

#include "lapreg/errors.hpp"

namespace lapreg {

Cut sweep_cut(const Eigen::VectorXd& x, double K) {
  if (!x.allFinite()) throw ParameterError("sweep_cut: vector has non-finite entries");
  Cut cut;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    (x(i) >= K ? cut.side_c : cut.side_complement).push_back(static_cast<int>(i));
  }
  return cut;
}

Cut sweep_cut(const Graph& g, const Eigen::VectorXd& x, double K) {
  if (x.size() != g.num_nodes()) throw ParameterError("sweep_cut: dimension mismatch");
  Cut cut = sweep_cut(x, K);
  if (!cut.side_c.empty() && !cut.side_complement.empty()) {
    double vc = 0.0, vr = 0.0;
    for (int i : cut.side_c) vc += g.degree(i);
    for (int i : cut.side_complement) vr += g.degree(i);
    if (vc > 0.0 && vr > 0.0) cut.conductance = conductance(g, cut.side_c);
  }
  return cut;
}

double conductance(const Graph& g, std::span<const int> side) {
  const int n = g.num_nodes();
  std::vector<char> in(n, 0);
  for (int i : side) {
    if (i < 0 || i >= n) throw ParameterError("conductance: node id out of range");
    in[i] = 1;
  }
  const auto count = std::count(in.begin(), in.end(), 1);
  if (count == 0 || count == n) {
    throw DomainError("conductance: side must be a nonempty proper subset");
  }
  double cut = 0.0, vol = 0.0, total = 0.0;
  for (const Edge& e : g.edges()) {
    if (in[e.u] != in[e.v]) cut += e.weight;
  }
  for (int i = 0; i < n; ++i) {
    total += g.degree(i);
    if (in[i]) vol += g.degree(i);
  }
  const double denom = std::min(vol, total - vol);
  if (!(denom > 0.0)) throw DomainError("conductance: a side has zero volume");
  return cut / denom;
}

std::vector<int> local_partition(const SymMatrix& lplus, int u, double K) {
  if (u < 0 || u >= lplus.order()) throw ParameterError("local_partition: node out of range");
  std::vector<int> out;
  for (Eigen::Index v = 0; v < lplus.order(); ++v) {
    if (lplus(u, v) > K) out.push_back(static_cast<int>(v));
  }
  return out;
}

Cut best_sweep_cut(const Graph& g, const Eigen::VectorXd& x) {
  std::vector<double> levels(x.data(), x.data() + x.size());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  if (levels.size() < 2) throw DomainError("best_sweep_cut: vector is constant");
  Cut best;
  for (std::size_t i = 1; i < levels.size(); ++i) {
    Cut c = sweep_cut(g, x, levels[i]);
    if (c.conductance && (!best.conductance || *c.conductance < *best.conductance)) {
      best = std::move(c);
    }
  }
  if (!best.conductance) throw DomainError("best_sweep_cut: no cut with defined conductance");
  return best;
}

}  // namespace lapreg
