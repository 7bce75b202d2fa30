#include "lapreg/sampling.hpp"

#include <algorithm>
#include <random>
#include <vector>

#include "lapreg/errors.hpp"

namespace lapreg {

namespace {
constexpr std::int64_t kMaxRejections = 1'000'000;
}

SampleDraw sample_edges(const Graph& pop, int m, Rng& rng, IsolatedNodes policy) {
  if (m < 1) throw ParameterError("sample_edges: m must be >= 1");
  if (pop.num_edges() == 0) throw ParameterError("sample_edges: population has no edges");
  // Swapped populations are occasionally disconnected; only the rejection
  // policy needs the precondition.
  if (policy == IsolatedNodes::kReject && !pop.is_connected()) {
    throw ParameterError("sample_edges: population graph must be connected");
  }
  const auto& edges = pop.edges();
  std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
  std::vector<int> counts(edges.size());
  std::vector<char> covered(pop.num_nodes());
  SampleDraw out;
  out.m = m;
  for (;;) {
    std::fill(counts.begin(), counts.end(), 0);
    for (int i = 0; i < m; ++i) ++counts[pick(rng)];
    if (policy == IsolatedNodes::kReject) {
      std::fill(covered.begin(), covered.end(), 0);
      for (std::size_t e = 0; e < edges.size(); ++e) {
        if (counts[e] > 0) covered[edges[e].u] = covered[edges[e].v] = 1;
      }
      if (std::find(covered.begin(), covered.end(), 0) != covered.end()) {
        if (++out.rejected >= kMaxRejections) {
          throw ConvergenceError("sample_edges: too many draws with isolated nodes",
                                 static_cast<double>(out.rejected));
        }
        continue;
      }
    }
    break;
  }
  std::vector<Edge> kept;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (counts[e] > 0) kept.push_back({edges[e].u, edges[e].v, static_cast<double>(counts[e])});
  }
  out.graph = Graph(pop.num_nodes(), std::move(kept));
  return out;
}

SymMatrix sample_laplacian(const SampleDraw& draw, IsolatedNodes policy) {
  return normalized_laplacian(draw.graph, policy == IsolatedNodes::kKeep
                                              ? ZeroDegree::kZeroRow
                                              : ZeroDegree::kError);
}

}  // namespace lapreg
