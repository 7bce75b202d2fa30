#include "properties.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <utility>

#include "fixtures.hpp"
#include "lapreg/diffusion.hpp"
#include "lapreg/errors.hpp"
#include "lapreg/graph.hpp"
#include "lapreg/partition.hpp"
#include "lapreg/regularized_sdp.hpp"
#include "lapreg/sampling.hpp"
#include "lapreg/spectral.hpp"

namespace lapreg::testing {
namespace {

class Tracker {
 public:
  explicit Tracker(std::string name) { r_.name = std::move(name); }
  void pass() { ++r_.cases; }
  void check(bool ok, int c, const std::string& what) {
    if (ok) return;
    if (r_.failures++ == 0) {
      std::ostringstream s;
      s << "case " << c << ": " << what;
      r_.first_failure = s.str();
    }
  }
  PropertyResult done() { return r_; }

 private:
  PropertyResult r_;
};

Rng case_rng(std::uint64_t seed, std::uint64_t prop, int c) {
  return make_rng(seed, {prop, static_cast<std::uint64_t>(c)});
}

double log_uniform(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool psd(const Spectrum& s, double rel = 1e-10) {
  return s.size() == 0 || s.values(0) >= -rel * std::max(s.max_abs(), 1e-300);
}

double spectral_entropy(const SymMatrix& x) {
  const Spectrum s = eig_sym(x);
  double h = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double p = s.values(i);
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

void check_regsolution(Tracker& t, int c, const RegSolution& sol, const Eigen::VectorXd& d,
                       int expected_rank, const char* label) {
  const Feasibility f = check_feasibility(sol.theta_hat, d);
  const Spectrum s = eig_sym(sol.theta_hat);
  t.check(f.trace_error <= 1e-9, c, std::string(label) + " trace");
  t.check(f.nullspace_residual <= 1e-8, c, std::string(label) + " nullspace");
  t.check(psd(s), c, std::string(label) + " PSD");
  t.check(f.rank == expected_rank, c,
          std::string(label) + " rank " + std::to_string(f.rank) + " != " +
              std::to_string(expected_rank));
}

}  // namespace

PropertyResult prop_solver_invariants(int cases, std::uint64_t seed) {
  Tracker t("solver outputs satisfy RegSolution invariants");
  for (int c = 0; c < cases; ++c) {
    Rng rng = case_rng(seed, 1, c);
    const int n = uniform_int(rng, 3, 12);
    const Graph g = random_connected_graph(n, rng);
    const SymMatrix L = normalized_laplacian(g);
    const Eigen::VectorXd d = g.degrees();
    // exp(-eta * 2) stays above the 1e-10 rank cut for eta <= 10.
    const double eta = log_uniform(rng, 0.05, 10.0);
    check_regsolution(t, c, solve_logdet(L, d, eta), d, n - 1, "logdet");
    check_regsolution(t, c, solve_entropy(L, d, eta), d, n - 1, "entropy");
    try {
      check_regsolution(t, c, solve_unregularized(L, d), d, 1, "unregularized");
    } catch (const AmbiguityError&) {
    }
    if (c % 50 == 0 && n <= 8) {
      const Penalty p = (c / 50) % 2 ? Penalty::kEntropy : Penalty::kLogDet;
      check_regsolution(t, c, solve_numeric_oracle(L, d, eta, p), d, n - 1, "oracle");
    }
    t.pass();
  }
  return t.done();
}

PropertyResult prop_laplacian_invariants(int cases, std::uint64_t seed) {
  Tracker t("generated Laplacians are PSD with the right nullspace");
  for (int c = 0; c < cases; ++c) {
    Rng rng = case_rng(seed, 2, c);
    Graph g;
    ZeroDegree policy = ZeroDegree::kError;
    switch (c % 3) {
      case 0:
        g = random_connected_graph(uniform_int(rng, 2, 20), rng);
        break;
      case 1:
        g = edge_swap(generate_lattice(uniform_int(rng, 3, 8), uniform_int(rng, 3, 8)),
                      uniform_int(rng, 0, 100), rng);
        break;
      default: {
        const Graph pop = edge_swap(generate_lattice(6, 7), uniform_int(rng, 0, 64), rng);
        g = sample_edges(pop, uniform_int(rng, 1, 200), rng, IsolatedNodes::kKeep).graph;
        policy = ZeroDegree::kZeroRow;
      }
    }
    const SymMatrix L0 = combinatorial_laplacian(g);
    const Spectrum s0 = eig_sym(L0);
    t.check(psd(s0), c, "combinatorial PSD");
    t.check(max_abs(L0.matrix() * Eigen::VectorXd::Ones(g.num_nodes())) <=
                1e-10 * std::max(1.0, s0.max_abs()),
            c, "L0 1 = 0");
    const SymMatrix L = normalized_laplacian(g, policy);
    const Spectrum s = eig_sym(L);
    t.check(psd(s), c, "normalized PSD");
    t.check(max_abs(L.matrix() * sqrt_degrees(g)) <= 1e-10, c, "L D^{1/2}1 = 0");
    t.check(s.values(s.size() - 1) <= 2.0 + 1e-10, c, "eigenvalues <= 2");
    t.pass();
  }
  return t.done();
}

PropertyResult prop_pseudoinverse(int cases, std::uint64_t seed) {
  Tracker t("pseudoinverse and pseudodeterminant identities");
  for (int c = 0; c < cases; ++c) {
    Rng rng = case_rng(seed, 3, c);
    const int n = uniform_int(rng, 1, 20);
    const int rank = uniform_int(rng, 0, n);
    const SymMatrix a = random_psd(n, rank, rng);
    const SymMatrix plus = pseudoinverse(a);
    const double na = a.matrix().norm();
    t.check((a.matrix() * plus.matrix() * a.matrix() - a.matrix()).norm() <= 1e-8 * na, c,
            "A A+ A = A");
    const Spectrum s = eig_sym(a);
    double logsum = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (s.values(i) > kRankTol * s.max_abs()) logsum += std::log(s.values(i));
    }
    const PseudoDeterminant pd = pseudodeterminant(a);
    t.check(std::abs(pd.log_value - logsum) <= 1e-10 * std::max(1.0, std::abs(logsum)), c,
            "log pdet = sum log lambda");
    t.check(pd.rank == rank, c, "pdet rank");
    t.pass();
  }
  return t.done();
}

PropertyResult prop_heat_semigroup(int cases, std::uint64_t seed) {
  Tracker t("heat kernel semigroup and trace monotonicity");
  std::uniform_real_distribution<double> time(0.0, 3.0);
  for (int c = 0; c < cases; ++c) {
    Rng rng = case_rng(seed, 4, c);
    const Graph g = random_connected_graph(uniform_int(rng, 2, 15), rng);
    const NormalizedSpectrum ns(g);
    const double s = time(rng), u = time(rng);
    const SymMatrix hs = heat_kernel(ns, s), hu = heat_kernel(ns, u), hsu = heat_kernel(ns, s + u);
    t.check(max_abs(hs.matrix() * hu.matrix() - hsu.matrix()) <= 1e-8, c, "H_s H_t = H_{s+t}");
    t.check(hsu.trace() <= hs.trace() + 1e-12, c, "trace non-increasing");
    t.check(max_abs(hs.matrix() * ns.sqrt_degrees() - ns.sqrt_degrees()) <= 1e-10, c,
            "H D^{1/2}1 = D^{1/2}1");
    t.pass();
  }
  return t.done();
}

PropertyResult prop_pagerank_resolvent(int cases, std::uint64_t seed) {
  Tracker t("PageRank resolvent identity");
  std::uniform_real_distribution<double> ug(0.01, 0.99);
  for (int c = 0; c < cases; ++c) {
    Rng rng = case_rng(seed, 5, c);
    const Graph g = random_connected_graph(uniform_int(rng, 2, 15), rng);
    const double gamma = ug(rng);
    const NormalizedSpectrum ns(g);
    const Eigen::MatrixXd R = pagerank_operator(ns, gamma);
    const Eigen::MatrixXd M = random_walk_matrix(g);
    const Eigen::Index n = M.rows();
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    t.check(max_abs(R * (I - (1.0 - gamma) * M) - gamma * I) <= 1e-9, c, "R (I - (1-g) M) = g I");
    t.check(max_abs(R.rowwise().sum() - Eigen::VectorXd::Ones(n)) <= 1e-9, c, "rows sum to 1");
    const Eigen::VectorXd v = ns.sqrt_degrees();
    const Eigen::MatrixXd S = v.asDiagonal() * R * v.cwiseInverse().asDiagonal();
    t.check(max_abs(S - S.transpose()) <= 1e-9, c, "symmetrized form symmetric");
    t.pass();
  }
  return t.done();
}

PropertyResult prop_edge_swap_degrees(int cases, std::uint64_t seed) {
  Tracker t("edge swaps preserve degrees and simplicity");
  for (int c = 0; c < cases; ++c) {
    Rng rng = case_rng(seed, 6, c);
    const Graph g = generate_lattice(uniform_int(rng, 3, 7), uniform_int(rng, 3, 7));
    const Graph h = edge_swap(g, uniform_int(rng, 0, 200), rng);
    t.check(h.degrees() == g.degrees(), c, "degree sequence");
    t.check(h.is_simple() && h.has_unit_weights(), c, "simple");
    t.check(h.num_edges() == g.num_edges(), c, "edge count");
    t.pass();
  }
  return t.done();
}

PropertyResult prop_sweep_partition(int cases, std::uint64_t seed) {
  Tracker t("sweep cuts partition V; conductance is side-symmetric");
  std::normal_distribution<double> z(0.0, 1.0);
  for (int c = 0; c < cases; ++c) {
    Rng rng = case_rng(seed, 7, c);
    const int n = uniform_int(rng, 2, 30);
    const Graph g = random_connected_graph(n, rng);
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = std::round(z(rng) * 10.0) / 10.0;  // force ties
    const double K = c % 2 ? x(uniform_int(rng, 0, n - 1)) : z(rng);
    const Cut cut = sweep_cut(g, x, K);
    std::set<int> all(cut.side_c.begin(), cut.side_c.end());
    all.insert(cut.side_complement.begin(), cut.side_complement.end());
    t.check(static_cast<int>(all.size()) == n &&
                static_cast<int>(cut.side_c.size() + cut.side_complement.size()) == n,
            c, "exhaustive and disjoint");
    for (int i : cut.side_c) t.check(x(i) >= K, c, "side C has x >= K");
    for (int i : cut.side_complement) t.check(x(i) < K, c, "complement has x < K");
    if (cut.conductance) {
      const double phi = *cut.conductance;
      t.check(phi >= 0.0 && phi <= 1.0 + 1e-12, c, "conductance in [0,1]");
      t.check(std::abs(conductance(g, cut.side_complement) - phi) <= 1e-12, c,
              "conductance symmetric");
    }
    t.pass();
  }
  return t.done();
}

PropertyResult prop_objective_dominance(int cases, std::uint64_t seed) {
  Tracker t("log-det solution minimizes the regularized objective");
  std::normal_distribution<double> z(0.0, 1.0);
  for (int c = 0; c < cases; ++c) {
    // 50 feasible competitors per instance.
    Rng rng = case_rng(seed, 8, c / 50);
    const int n = uniform_int(rng, 3, 10);
    const Graph g = random_connected_graph(n, rng);
    const SymMatrix L = normalized_laplacian(g);
    const double eta = log_uniform(rng, 0.1, 20.0);
    const RegSolution sol = solve_logdet(L, g.degrees(), eta);
    const double best = logdet_objective(L, sol.theta_hat, eta);
    Rng xr = case_rng(seed, 9, c);
    const Eigen::MatrixXd Q = complement_basis(g.degrees().cwiseSqrt());
    const SymMatrix y = random_psd(n - 1, n - 1 + uniform_int(xr, 0, 5), xr);
    const SymMatrix x(Q * y.matrix() * Q.transpose() / y.trace());
    t.check(best <= logdet_objective(L, x, eta) + 1e-12 * std::max(1.0, std::abs(best)), c,
            "objective dominance");
    t.pass();
  }
  return t.done();
}

PropertyResult prop_entropy_monotone(int cases, std::uint64_t seed) {
  Tracker t("spectral entropy of the solution is non-increasing in eta");
  for (int c = 0; c < cases; ++c) {
    Rng rng = case_rng(seed, 10, c);
    const int n = uniform_int(rng, 3, 12);
    const Graph g = random_connected_graph(n, rng);
    const SymMatrix L = normalized_laplacian(g);
    double e1 = log_uniform(rng, 0.05, 10.0), e2 = log_uniform(rng, 0.05, 10.0);
    if (e1 > e2) std::swap(e1, e2);
    const auto d = g.degrees();
    t.check(spectral_entropy(solve_logdet(L, d, e1).theta_hat) >=
                spectral_entropy(solve_logdet(L, d, e2).theta_hat) - 1e-12,
            c, "logdet entropy monotone");
    t.check(spectral_entropy(solve_entropy(L, d, e1).theta_hat) >=
                spectral_entropy(solve_entropy(L, d, e2).theta_hat) - 1e-12,
            c, "entropy-penalty entropy monotone");
    t.pass();
  }
  return t.done();
}

PropertyResult prop_shift_root(int cases, std::uint64_t seed) {
  Tracker t("trace equation root is bracketed and solved");
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int c = 0; c < cases; ++c) {
    Rng rng = case_rng(seed, 11, c);
    const int k = uniform_int(rng, 1, 40);
    Eigen::VectorXd v(k);
    for (int i = 0; i < k; ++i) v(i) = u(rng);
    std::sort(v.data(), v.data() + k);
    const double eta = log_uniform(rng, 1e-3, 1e3);
    const double tshift = solve_shift(v, eta);
    auto g = [&](double s) {
      return ((v.array() - v(0) + s) * eta).inverse().sum() - 1.0;
    };
    t.check(tshift > 0.0, c, "shift positive");
    t.check(std::abs(g(tshift)) <= 1e-10, c, "root residual");
    t.check(g(tshift * (1.0 - 1e-6)) > 0.0 && g(tshift * (1.0 + 1e-6)) < 0.0, c,
            "sign change at the root");
    t.pass();
  }
  return t.done();
}

PropertyResult prop_local_partition_symmetry(int cases, std::uint64_t seed) {
  Tracker t("local partitions are symmetric");
  for (int c = 0; c < cases; ++c) {
    Rng rng = case_rng(seed, 12, c);
    const int n = uniform_int(rng, 2, 15);
    const Graph g = random_connected_graph(n, rng);
    const SymMatrix plus = pseudoinverse(normalized_laplacian(g));
    const double K = plus(uniform_int(rng, 0, n - 1), uniform_int(rng, 0, n - 1));
    std::vector<std::vector<int>> parts(n);
    for (int u = 0; u < n; ++u) parts[u] = local_partition(plus, u, K);
    for (int u = 0; u < n; ++u) {
      for (int v : parts[u]) {
        t.check(std::binary_search(parts[v].begin(), parts[v].end(), u), c, "v in P(u) => u in P(v)");
      }
    }
    t.pass();
  }
  return t.done();
}

PropertyResult prop_sample_draws(int cases, std::uint64_t seed) {
  Tracker t("sample draws carry m edges from the population");
  for (int c = 0; c < cases; ++c) {
    Rng rng = case_rng(seed, 13, c);
    const Graph pop = edge_swap(generate_lattice(6, 7), uniform_int(rng, 0, 64), rng);
    const bool reject = c % 4 == 0 && pop.is_connected();
    const int m = reject ? uniform_int(rng, 150, 300) : uniform_int(rng, 1, 300);
    const SampleDraw draw =
        sample_edges(pop, m, rng, reject ? IsolatedNodes::kReject : IsolatedNodes::kKeep);
    std::set<std::pair<int, int>> support;
    for (const Edge& e : pop.edges()) support.insert({e.u, e.v});
    double total = 0.0;
    for (const Edge& e : draw.graph.edges()) {
      total += e.weight;
      t.check(support.count({e.u, e.v}) == 1, c, "support within population");
    }
    t.check(total == m && draw.m == m, c, "total weight = m");
    if (reject) t.check(draw.graph.degrees().minCoeff() > 0.0, c, "no isolated node");
    t.pass();
  }
  return t.done();
}

std::vector<PropertyResult> run_all_properties(int cases, std::uint64_t seed) {
  return {prop_solver_invariants(cases, seed),   prop_laplacian_invariants(cases, seed),
          prop_pseudoinverse(cases, seed),       prop_heat_semigroup(cases, seed),
          prop_pagerank_resolvent(cases, seed),  prop_edge_swap_degrees(cases, seed),
          prop_sweep_partition(cases, seed),     prop_objective_dominance(cases, seed),
          prop_entropy_monotone(cases, seed),    prop_shift_root(cases, seed),
          prop_local_partition_symmetry(cases, seed), prop_sample_draws(cases, seed)};
}

}  // namespace lapreg::testing
