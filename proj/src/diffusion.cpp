#include "lapreg/diffusion.hpp"

#include <cmath>

#include "lapreg/errors.hpp"

namespace lapreg {
namespace {

void check_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw ParameterError("teleportation parameter gamma must lie in (0,1)");
  }
}

void require_positive_degrees(const Graph& g) {
  for (int u = 0; u < g.num_nodes(); ++u) {
    if (!(g.degree(u) > 0.0)) {
      throw DomainError("diffusion operators need positive degrees; node " +
                        std::to_string(u) + " is isolated");
    }
  }
}

}  // namespace

void DiffusionParams::validate() const {
  check_gamma(gamma);
  if (!(t >= 0.0) || !std::isfinite(t)) throw ParameterError("heat time t must be >= 0");
  if (!(alpha_hold > 0.0 && alpha_hold < 1.0)) {
    throw ParameterError("holding probability must lie in (0,1)");
  }
  if (steps < 0) throw ParameterError("lazy-walk steps must be >= 0");
}

NormalizedSpectrum::NormalizedSpectrum(const Graph& g)
    : spectrum_(eig_sym(normalized_laplacian(g))), sqrt_deg_(lapreg::sqrt_degrees(g)) {}

Eigen::MatrixXd random_walk_matrix(const Graph& g) {
  require_positive_degrees(g);
  return g.degrees().cwiseInverse().asDiagonal() * g.adjacency();
}

Eigen::MatrixXd pagerank_operator(const NormalizedSpectrum& ns, double gamma) {
  const SymMatrix s = symmetrized_pagerank(ns, gamma);
  return ns.sqrt_degrees().cwiseInverse().asDiagonal() * s.matrix() *
         ns.sqrt_degrees().asDiagonal();
}

Eigen::MatrixXd pagerank_operator(const Graph& g, double gamma) {
  check_gamma(gamma);
  require_positive_degrees(g);
  return pagerank_operator(NormalizedSpectrum(g), gamma);
}

SymMatrix symmetrized_pagerank(const NormalizedSpectrum& ns, double gamma) {
  check_gamma(gamma);
  return ns.spectrum().apply(
      [gamma](double l) { return gamma / (gamma + (1.0 - gamma) * l); });
}

SymMatrix heat_kernel(const NormalizedSpectrum& ns, double t) {
  if (!(t >= 0.0)) throw ParameterError("heat_kernel: t must be >= 0");
  return matrix_exp_sym(ns.spectrum(), -t);
}

SymMatrix heat_kernel(const Graph& g, double t) {
  if (!(t >= 0.0)) throw ParameterError("heat_kernel: t must be >= 0");
  require_positive_degrees(g);
  return heat_kernel(NormalizedSpectrum(g), t);
}

Eigen::MatrixXd lazy_walk(const Graph& g, double alpha_hold, int steps) {
  if (!(alpha_hold > 0.0 && alpha_hold < 1.0)) {
    throw ParameterError("lazy_walk: holding probability must lie in (0,1)");
  }
  if (steps < 0) throw ParameterError("lazy_walk: steps must be >= 0");
  const Eigen::Index n = g.num_nodes();
  Eigen::MatrixXd base = Eigen::MatrixXd::Identity(n, n) * alpha_hold +
                         (1.0 - alpha_hold) * random_walk_matrix(g);
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(n, n);
  // Binary powering.
  for (int k = steps; k > 0; k >>= 1) {
    if (k & 1) result = result * base;
    if (k > 1) base = base * base;
  }
  return result;
}

Eigen::VectorXd apply_seed(const Eigen::MatrixXd& op, const Eigen::VectorXd& seed) {
  if (op.cols() != seed.size()) {
    throw ParameterError("apply_seed: operator has " + std::to_string(op.cols()) +
                         " columns but seed has " + std::to_string(seed.size()) +
                         " entries");
  }
  return op * seed;
}

}  // namespace lapreg
