#include "lapreg/bayes.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "lapreg/errors.hpp"
#include "lapreg/spectral.hpp"

namespace lapreg {
namespace {

// Symmetric square root of the PSD part of a.
Eigen::MatrixXd psd_sqrt(const Spectrum& s) {
  return s.apply([](double l) { return l > 0.0 ? std::sqrt(l) : 0.0; }).matrix();
}

SymMatrix average_gaussian_outer(const Spectrum& cov, int m, Rng& rng) {
  const Eigen::Index n = cov.size();
  const Eigen::MatrixXd root = psd_sqrt(cov);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd z(n, m);
  for (int j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) z(i, j) = normal(rng);
  }
  const Eigen::MatrixXd x = root * z;
  return SymMatrix(x * x.transpose() / static_cast<double>(m));
}

}  // namespace

void BayesModel::validate() const {
  const double n = static_cast<double>(degrees.size());
  if (!(m >= n - 1.0)) throw ParameterError("Wishart scale m must be >= n-1");
  if (!(alpha_shape > 0.0)) throw ParameterError("Dirichlet shape must be > 0");
  if (!(tau_min > 0.0 && tau_max > tau_min)) {
    throw ParameterError("tau prior interval must satisfy 0 < tau_min < tau_max");
  }
}

ThetaDecomp theta_of(const SymMatrix& laplacian) {
  const SymMatrix plus = pseudoinverse(laplacian);
  const double tau = plus.trace();
  if (!(tau > 0.0)) throw DomainError("theta_of: pseudoinverse has zero trace");
  return {tau, SymMatrix(plus.matrix() / tau)};
}

double wishart_log_density(const SymMatrix& lobs, const SymMatrix& lpop, double m) {
  if (lobs.order() != lpop.order()) throw ParameterError("matrix orders differ");
  const Spectrum pop = eig_sym(lpop);
  const double cut = kRankTol * pop.max_abs();
  const double obs_scale = std::max(lobs.matrix().cwiseAbs().maxCoeff(), 1e-300);
  for (Eigen::Index i = 0; i < pop.size(); ++i) {
    if (std::abs(pop.values(i)) > cut) continue;
    if ((lobs.matrix() * pop.vectors.col(i)).norm() > 1e-8 * obs_scale) {
      throw DomainError("wishart_log_density: observed matrix does not share the "
                        "population nullspace");
    }
  }
  const SymMatrix plus = pseudoinverse(pop);
  const double trace_term = lobs.matrix().cwiseProduct(plus.matrix()).sum();
  return -0.5 * m * trace_term - 0.5 * m * pseudodeterminant(pop).log_value;
}

SymMatrix sample_wishart(const SymMatrix& lpop, int m, Rng& rng) {
  if (m < lpop.order() - 1 || m < 1) {
    throw ParameterError("sample_wishart: m must be >= n-1 for a density to exist");
  }
  return average_gaussian_outer(eig_sym(lpop), m, rng);
}

double dirichlet_log_density(const Eigen::VectorXd& lambda, double alpha_shape) {
  if (!(alpha_shape > 0.0)) throw ParameterError("Dirichlet shape must be > 0");
  const Eigen::Index k = lambda.size();
  if (k == 0) throw ParameterError("empty Dirichlet argument");
  if ((lambda.array() <= 0.0).any() || std::abs(lambda.sum() - 1.0) > 1e-9) {
    throw DomainError("dirichlet_log_density: argument is not in the open simplex");
  }
  const double kd = static_cast<double>(k);
  const double log_norm = std::lgamma(kd * alpha_shape) - kd * std::lgamma(alpha_shape);
  return log_norm + (alpha_shape - 1.0) * lambda.array().log().sum();
}

Eigen::VectorXd sample_dirichlet(double alpha_shape, int k, Rng& rng) {
  if (!(alpha_shape > 0.0)) throw ParameterError("Dirichlet shape must be > 0");
  if (k < 1) throw ParameterError("Dirichlet dimension must be >= 1");
  // G(a) = G(a+1) U^{1/a} for a < 1 keeps tiny shapes representable.
  const bool boost = alpha_shape < 1.0;
  std::gamma_distribution<double> gamma(boost ? alpha_shape + 1.0 : alpha_shape, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::VectorXd logs(k);
  for (int i = 0; i < k; ++i) {
    double lg = std::log(gamma(rng));
    if (boost) {
      double u = unif(rng);
      while (u == 0.0) u = unif(rng);
      lg += std::log(u) / alpha_shape;
    }
    logs(i) = lg;
  }
  const double top = logs.maxCoeff();
  Eigen::VectorXd out = (logs.array() - top).exp();
  return out / out.sum();
}

double prior_log_density(const SymMatrix& lpop, const BayesModel& model) {
  const ThetaDecomp td = theta_of(lpop);
  if (td.tau < model.tau_min || td.tau > model.tau_max) {
    return -std::numeric_limits<double>::infinity();
  }
  return (model.alpha_shape - 1.0) * pseudodeterminant(td.theta).log_value;
}

double posterior_log_density(const SymMatrix& lpop, const SymMatrix& lobs,
                             const BayesModel& model) {
  model.validate();
  const Eigen::Index n = lpop.order();
  if (model.degrees.size() != n || lobs.order() != n) {
    throw ParameterError("posterior_log_density: dimension mismatch");
  }
  const Spectrum s = eig_sym(lpop);
  const Eigen::VectorXd v = model.degrees.cwiseSqrt();
  const double scale = std::max(s.max_abs(), 1e-300);
  if (s.values(0) < -1e-10 * scale) throw DomainError("population matrix is not PSD");
  if ((lpop.matrix() * v).norm() > 1e-8 * scale * v.norm()) {
    throw DomainError("population matrix does not annihilate D^{1/2}1");
  }
  if (numerical_rank(s) != n - 1) throw DomainError("population matrix rank is not n-1");
  return wishart_log_density(lobs, lpop, model.m) + prior_log_density(lpop, model);
}

double eta_map(double m, double alpha_shape, double tau_hat) {
  if (!(tau_hat > 0.0)) throw ParameterError("eta_map: tau_hat must be > 0");
  const double denom = m + 2.0 * (alpha_shape - 1.0);
  if (!(denom > 0.0)) {
    throw ParameterError("eta_map: m + 2(alpha-1) must be > 0 (prior too sharp for m)");
  }
  return m * tau_hat / denom;
}

double eta_map_general(double m, double tau_hat, const std::function<double(double)>& q) {
  if (!(tau_hat > 0.0)) throw ParameterError("eta_map_general: tau_hat must be > 0");
  const double qv = q(tau_hat);
  if (!(qv > 0.0)) throw ParameterError("eta_map_general: q(tau_hat) must be > 0");
  return m * tau_hat / (2.0 * qv);
}

Eigen::VectorXd incidence_vector(const Graph& omega, const IncidenceDraw& draw) {
  const Edge& e = omega.edges().at(draw.edge);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(omega.num_nodes());
  x(e.u) = draw.sign;
  x(e.v) = -draw.sign;
  return x;
}

IncidenceSample sample_edge_incidence(const Graph& omega, int m, Rng& rng) {
  if (omega.num_edges() == 0) throw ParameterError("sample_edge_incidence: no edges");
  if (m < 1) throw ParameterError("sample_edge_incidence: m must be >= 1");
  std::vector<double> weights;
  weights.reserve(omega.num_edges());
  double total = 0.0;
  for (const Edge& e : omega.edges()) {
    if (e.u == e.v) throw ParameterError("sample_edge_incidence: self-loops not supported");
    weights.push_back(e.weight);
    total += e.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ParameterError("sample_edge_incidence: edge weights must sum to 1");
  }
  std::discrete_distribution<int> pick(weights.begin(), weights.end());
  std::bernoulli_distribution coin(0.5);
  IncidenceSample out;
  out.draws.reserve(m);
  const int n = omega.num_nodes();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < m; ++i) {
    IncidenceDraw d{pick(rng), coin(rng) ? 1 : -1};
    const Edge& e = omega.edges()[d.edge];
    // x x' has +1 on (u,u), (v,v) and -1 on (u,v), (v,u) whatever the sign.
    acc(e.u, e.u) += 1.0;
    acc(e.v, e.v) += 1.0;
    acc(e.u, e.v) -= 1.0;
    acc(e.v, e.u) -= 1.0;
    out.draws.push_back(d);
  }
  out.l0_hat = SymMatrix(acc / static_cast<double>(m));
  return out;
}

SymMatrix gaussian_surrogate(const SymMatrix& l0pop, int m, Rng& rng) {
  const Spectrum s = eig_sym(l0pop);
  if (m < numerical_rank(s) || m < 1) {
    throw ParameterError("gaussian_surrogate: m must be >= rank of the covariance");
  }
  return average_gaussian_outer(s, m, rng);
}

}  // namespace lapreg
