#pragma once

#include <Eigen/Dense>

#include "lapreg/graph.hpp"
#include "lapreg/spectral.hpp"

namespace lapreg {

// Knobs of the three diffusions. `alpha_hold` is the lazy walk's holding
// probability (not the Dirichlet shape).
struct DiffusionParams {
  double gamma = 0.15;      // teleportation, (0,1)
  double t = 1.0;           // heat time, >= 0
  double alpha_hold = 0.5;  // (0,1)
  int steps = 1;            // lazy-walk steps, >= 0

  // Throws ParameterError naming the first field out of range.
  void validate() const;
};

// Eigendecomposition of the normalized Laplacian together with D^{1/2}1.
// One instance serves every gamma or t in a sweep.
class NormalizedSpectrum {
 public:
  // Requires all degrees > 0.
  explicit NormalizedSpectrum(const Graph& g);

  const Spectrum& spectrum() const { return spectrum_; }
  const Eigen::VectorXd& sqrt_degrees() const { return sqrt_deg_; }
  Eigen::Index size() const { return sqrt_deg_.size(); }

 private:
  Spectrum spectrum_;
  Eigen::VectorXd sqrt_deg_;
};

// M = D^{-1} A; rows sum to one.
Eigen::MatrixXd random_walk_matrix(const Graph& g);

// R_gamma = gamma (I - (1-gamma) M)^{-1}, evaluated as
// gamma D^{-1/2} (gamma I + (1-gamma) L)^{-1} D^{1/2}. Rows sum to one.
Eigen::MatrixXd pagerank_operator(const Graph& g, double gamma);
Eigen::MatrixXd pagerank_operator(const NormalizedSpectrum& ns, double gamma);

// D^{1/2} R_gamma D^{-1/2} = gamma (gamma I + (1-gamma) L)^{-1}.
SymMatrix symmetrized_pagerank(const NormalizedSpectrum& ns, double gamma);

// H_t = exp(-t L).
SymMatrix heat_kernel(const Graph& g, double t);
SymMatrix heat_kernel(const NormalizedSpectrum& ns, double t);

// (alpha I + (1-alpha) M)^steps.
Eigen::MatrixXd lazy_walk(const Graph& g, double alpha_hold, int steps);

Eigen::VectorXd apply_seed(const Eigen::MatrixXd& op, const Eigen::VectorXd& seed);

}  // namespace lapreg
