#pragma once

#include <cstdint>

#include "lapreg/graph.hpp"
#include "lapreg/rng.hpp"
#include "lapreg/sym_matrix.hpp"

namespace lapreg {

enum class IsolatedNodes {
  kReject,  // redraw the whole sample until every node has positive degree
  kKeep,    // accept the draw; isolated nodes get zero rows in L
};

struct SampleDraw {
  Graph graph;  // edge weights are multiplicities, in population edge order
  int m = 0;
  std::int64_t rejected = 0;
};

// m uniform draws with replacement from pop's edges. Under kReject, throws
// ConvergenceError after 10^6 rejected draws.
SampleDraw sample_edges(const Graph& pop, int m, Rng& rng,
                        IsolatedNodes policy = IsolatedNodes::kReject);

// Normalized Laplacian of the multiplicity-weighted sample. Under kReject an
// isolated node is a DomainError.
SymMatrix sample_laplacian(const SampleDraw& draw,
                           IsolatedNodes policy = IsolatedNodes::kReject);

}  // namespace lapreg
