#include "lapreg/regularized_sdp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <numeric>
#include <vector>

#include "lapreg/errors.hpp"

namespace lapreg {
namespace {

void check_eta(double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw ParameterError("regularization scale eta must be finite and > 0");
  }
}

SymMatrix assemble(const Eigen::MatrixXd& basis, const Eigen::VectorXd& weights) {
  return SymMatrix(basis * weights.asDiagonal() * basis.transpose());
}

// Euclidean projection of z onto {p >= 0, sum p = 1}.
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& z) {
  std::vector<double> sorted(z.data(), z.data() + z.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    cumulative += sorted[i];
    const double candidate = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (sorted[i] - candidate > 0.0) theta = candidate;
  }
  return (z.array() - theta).cwiseMax(0.0);
}

Eigen::MatrixXd project_to_spectraplex(const Eigen::MatrixXd& y) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (y + y.transpose()));
  const Eigen::VectorXd p = project_to_simplex(es.eigenvalues());
  return es.eigenvectors() * p.asDiagonal() * es.eigenvectors().transpose();
}

struct OracleProblem {
  Eigen::MatrixXd b;
  double eta;
  Penalty penalty;

  // +inf outside the domain (log-det on a singular Y).
  double value(const Eigen::MatrixXd& y) const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(y, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = es.eigenvalues();
    const double linear = (b.cwiseProduct(y)).sum();
    if (penalty == Penalty::kLogDet) {
      if (!(ev.minCoeff() > 0.0)) return std::numeric_limits<double>::infinity();
      return linear - ev.array().log().sum() / eta;
    }
    double ent = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      if (ev(i) < -1e-14) return std::numeric_limits<double>::infinity();
      if (ev(i) > 0.0) ent += ev(i) * std::log(ev(i)) - ev(i);
    }
    return linear + ent / eta;
  }

  Eigen::MatrixXd gradient(const Eigen::MatrixXd& y) const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(y);
    const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(1e-300);
    Eigen::VectorXd mapped(ev.size());
    if (penalty == Penalty::kLogDet) {
      mapped = -ev.cwiseInverse() / eta;
    } else {
      mapped = ev.array().log().matrix() / eta;
    }
    return b + es.eigenvectors() * mapped.asDiagonal() * es.eigenvectors().transpose();
  }
};

double inner(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a.cwiseProduct(b).sum();
}

}  // namespace

std::string_view penalty_name(Penalty p) {
  switch (p) {
    case Penalty::kLogDet: return "logdet";
    case Penalty::kEntropy: return "entropy";
    case Penalty::kNone: return "none";
    case Penalty::kOracle: return "oracle";
  }
  return "unknown";
}

ReducedLaplacian reduce_laplacian(const SymMatrix& L, const Eigen::VectorXd& degrees,
                                  Support support) {
  if (degrees.size() != L.order()) {
    throw ParameterError("degree vector length does not match the Laplacian order");
  }
  if ((degrees.array() < 0.0).any()) throw ParameterError("negative degree");
  const Eigen::VectorXd v = degrees.cwiseSqrt();
  if (L.order() < 2) throw ParameterError("need at least two nodes");
  const double scale = std::max(L.matrix().cwiseAbs().maxCoeff(), 1.0) * v.norm();
  if ((L.matrix() * v).cwiseAbs().maxCoeff() > 1e-8 * scale) {
    throw DomainError("Laplacian does not annihilate D^{1/2}1 for the given degrees");
  }

  const Eigen::MatrixXd q = complement_basis(v);
  const Spectrum reduced = eig_sym(SymMatrix(q.transpose() * L.matrix() * q));
  const double cut = kRankTol * std::max(reduced.max_abs(), L.matrix().cwiseAbs().maxCoeff());

  ReducedLaplacian out;
  out.disconnected = reduced.values(0) <= cut;
  Eigen::Index first = 0;
  if (support == Support::kRange) {
    while (first < reduced.size() && reduced.values(first) <= cut) ++first;
    if (first == reduced.size()) throw DomainError("Laplacian has empty range");
  }
  const Eigen::Index k = reduced.size() - first;
  out.values = reduced.values.tail(k);
  out.basis = q * reduced.vectors.rightCols(k);
  return out;
}

double solve_shift(const Eigen::VectorXd& values, double eta) {
  check_eta(eta);
  const Eigen::Index k = values.size();
  if (k == 0) throw ParameterError("solve_shift: empty spectrum");
  const Eigen::VectorXd gaps = values.array() - values(0);
  // g is strictly decreasing in t; g(1/eta) >= 0 >= g(k/eta).
  auto g = [&](double t) { return (gaps.array() + t).inverse().sum() / eta - 1.0; };
  double lo = 1.0 / eta;
  double hi = static_cast<double>(k) / eta;
  if (k == 1) return lo;
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > 0.0) lo = mid;
    else hi = mid;
  }
  double t = 0.5 * (lo + hi);
  for (int step = 0; step < 2; ++step) {
    const double slope = -(gaps.array() + t).square().inverse().sum() / eta;
    const double next = t - g(t) / slope;
    if (next >= lo && next <= hi) t = next;
  }
  return t;
}

RegSolution solve_logdet(const ReducedLaplacian& reduced, double eta) {
  check_eta(eta);
  const double t = solve_shift(reduced.values, eta);
  const Eigen::VectorXd gaps = reduced.values.array() - reduced.values(0);
  const Eigen::VectorXd weights = ((gaps.array() + t) * eta).inverse();
  RegSolution sol;
  sol.theta_hat = assemble(reduced.basis, weights);
  sol.eta = eta;
  sol.nu = t - reduced.values(0);
  sol.penalty = Penalty::kLogDet;
  sol.disconnected = reduced.disconnected;
  return sol;
}

RegSolution solve_logdet(const SymMatrix& L, const Eigen::VectorXd& degrees, double eta,
                         Support support) {
  check_eta(eta);
  return solve_logdet(reduce_laplacian(L, degrees, support), eta);
}

RegSolution solve_entropy(const SymMatrix& L, const Eigen::VectorXd& degrees, double eta,
                          Support support) {
  check_eta(eta);
  const ReducedLaplacian reduced = reduce_laplacian(L, degrees, support);
  const double lambda_min = reduced.values(0);
  const Eigen::VectorXd unnormalized =
      (-(reduced.values.array() - lambda_min) * eta).exp();
  const double partial = unnormalized.sum();
  RegSolution sol;
  sol.theta_hat = assemble(reduced.basis, unnormalized / partial);
  sol.eta = eta;
  sol.nu = (std::log(partial) - eta * lambda_min) / eta;
  sol.penalty = Penalty::kEntropy;
  sol.disconnected = reduced.disconnected;
  return sol;
}

RegSolution solve_unregularized(const SymMatrix& L, const Eigen::VectorXd& degrees) {
  const ReducedLaplacian reduced = reduce_laplacian(L, degrees, Support::kComplement);
  if (reduced.values.size() >= 2) {
    const double scale = std::max(reduced.values.cwiseAbs().maxCoeff(), 1e-300);
    if (reduced.values(1) - reduced.values(0) <= 1e-9 * scale) {
      throw AmbiguityError(
          "smallest nontrivial eigenvalue is not simple; the unregularized "
          "problem has no unique solution");
    }
  }
  const Eigen::VectorXd u = reduced.basis.col(0);
  RegSolution sol;
  sol.theta_hat = SymMatrix(u * u.transpose());
  sol.eta = std::numeric_limits<double>::infinity();
  sol.nu = -reduced.values(0);
  sol.penalty = Penalty::kNone;
  sol.disconnected = reduced.disconnected;
  return sol;
}

RegSolution solve_numeric_oracle(const SymMatrix& L, const Eigen::VectorXd& degrees,
                                 double eta, Penalty penalty, OracleOptions options) {
  check_eta(eta);
  if (penalty != Penalty::kLogDet && penalty != Penalty::kEntropy) {
    throw ParameterError("oracle supports the logdet and entropy penalties only");
  }
  if (L.order() > 30) throw ParameterError("oracle is limited to n <= 30");
  if (degrees.size() != L.order()) throw ParameterError("degree vector length mismatch");

  const Eigen::MatrixXd q = complement_basis(degrees.cwiseSqrt());
  const Eigen::Index k = q.cols();
  const OracleProblem problem{q.transpose() * L.matrix() * q, eta, penalty};

  // Generic interior start that does not commute with the reduced Laplacian.
  Eigen::VectorXd ramp = Eigen::VectorXd::LinSpaced(k, 1.0, static_cast<double>(k));
  ramp.normalize();
  Eigen::MatrixXd y = Eigen::MatrixXd::Identity(k, k) + 0.5 * ramp * ramp.transpose();
  y /= y.trace();

  double f = problem.value(y);
  Eigen::MatrixXd grad = problem.gradient(y);
  double step = 1.0 / std::max(grad.norm(), 1e-12);
  constexpr std::size_t kMemory = 10;
  std::deque<double> history{f};
  double residual = std::numeric_limits<double>::infinity();

  Eigen::MatrixXd best_y = y;
  double best_residual = residual;

  auto finish = [&](const Eigen::MatrixXd& y, double residual, int it) {
    RegSolution sol;
    sol.theta_hat = SymMatrix(q * y * q.transpose());
    sol.eta = eta;
    sol.nu = std::numeric_limits<double>::quiet_NaN();
    sol.penalty = Penalty::kOracle;
    sol.iterations = it;
    sol.residual = residual;
    return sol;
  };
  int it = 1;
  for (; it <= options.max_iterations; ++it) {
    residual = (project_to_spectraplex(y - grad) - y).norm();
    if (residual <= options.tolerance) return finish(y, residual, it);
    if (residual < best_residual) best_y = y, best_residual = residual;
    const Eigen::MatrixXd direction = project_to_spectraplex(y - step * grad) - y;
    const double slope = inner(grad, direction);
    const double reference = *std::max_element(history.begin(), history.end());
    double lambda = 1.0;
    Eigen::MatrixXd y_next;
    double f_next = 0.0;
    while (true) {
      y_next = y + lambda * direction;
      f_next = problem.value(y_next);
      if (f_next <= reference + 1e-4 * lambda * slope) break;
      lambda *= 0.5;
      if (lambda < 1e-30) break;  // stalled at rounding level
    }
    if (lambda < 1e-30) {
      // No decrease representable in double precision.
      break;
    }
    const Eigen::MatrixXd grad_next = problem.gradient(y_next);
    const Eigen::MatrixXd s = y_next - y;
    const double sy = inner(s, grad_next - grad);
    step = sy > 0.0 ? std::clamp(inner(s, s) / sy, 1e-12, 1e12) : 1e12;
    y = y_next;
    f = f_next;
    grad = grad_next;
    history.push_back(f);
    if (history.size() > kMemory) history.pop_front();
  }
  // The spectral step is non-monotone in the residual; fall back to the best
  // iterate seen.
  if (best_residual <= options.floor_tolerance) {
    return finish(best_y, best_residual, std::min(it, options.max_iterations));
  }
  throw ConvergenceError("numeric oracle did not converge; projected-gradient norm " +
                             std::to_string(best_residual),
                         best_residual);
}

double logdet_objective(const SymMatrix& L, const SymMatrix& x, double eta) {
  check_eta(eta);
  const PseudoDeterminant pd = pseudodeterminant(x);
  return (L.matrix().cwiseProduct(x.matrix())).sum() - pd.log_value / eta;
}

double entropy_objective(const SymMatrix& L, const SymMatrix& x, double eta) {
  check_eta(eta);
  const Spectrum s = eig_sym(x);
  double ent = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s.values(i) > 0.0) ent += s.values(i) * std::log(s.values(i)) - s.values(i);
  }
  return (L.matrix().cwiseProduct(x.matrix())).sum() + ent / eta;
}

double gamma_for_nu(double nu) {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw ParameterError("gamma_for_nu: nu must be > 0");
  return nu / (1.0 + nu);
}

double nu_for_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw ParameterError("nu_for_gamma: gamma must lie in (0,1)");
  }
  return gamma / (1.0 - gamma);
}

SymMatrix project_and_normalize(const SymMatrix& a, const Eigen::VectorXd& degrees) {
  const SymMatrix p = projector_complement(degrees.cwiseSqrt());
  const Eigen::MatrixXd pap = p.matrix() * a.matrix() * p.matrix();
  const double tr = pap.trace();
  if (!(std::abs(tr) > 0.0)) throw DomainError("projected matrix has zero trace");
  return SymMatrix(pap / tr);
}

Feasibility check_feasibility(const SymMatrix& x, const Eigen::VectorXd& degrees) {
  const Eigen::VectorXd v = degrees.cwiseSqrt();
  const Spectrum s = eig_sym(x);
  Feasibility out;
  out.trace_error = std::abs(x.trace() - 1.0);
  out.nullspace_residual = (x.matrix() * v).cwiseAbs().maxCoeff() / v.norm();
  out.min_eigenvalue = s.values.size() ? s.values(0) : 0.0;
  out.rank = numerical_rank(s);
  return out;
}

}  // namespace lapreg
