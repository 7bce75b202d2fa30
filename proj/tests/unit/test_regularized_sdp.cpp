#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "lapreg/diffusion.hpp"
#include "lapreg/errors.hpp"
#include "lapreg/graph.hpp"
#include "lapreg/partition.hpp"
#include "lapreg/regularized_sdp.hpp"

using namespace lapreg;
using namespace lapreg::testing;

namespace {

Eigen::MatrixXd k4_solution() {
  return (Eigen::MatrixXd::Identity(4, 4) - Eigen::MatrixXd::Constant(4, 4, 0.25)) / 3.0;
}

double rel_frob(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).norm() / b.norm();
}

}  // namespace

TEST_CASE("log-det K4 closed form") {
  const Graph k4 = complete_graph(4);
  const SymMatrix L = normalized_laplacian(k4);
  for (double eta : {0.01, 0.5, 1.0, 2.25, 7.0, 100.0}) {
    const RegSolution s = solve_logdet(L, k4.degrees(), eta);
    CHECK(max_abs(s.theta_hat.matrix() - k4_solution()) < 1e-12);
    CHECK(s.nu == doctest::Approx(3.0 / eta - 4.0 / 3.0).epsilon(1e-10));
    CHECK_FALSE(s.disconnected);
  }
}

TEST_CASE("strong regularization gives the uniform complement matrix") {
  Rng rng(31);
  const Graph g = random_connected_graph(7, rng);
  const Eigen::MatrixXd p = projector_complement(sqrt_degrees(g)).matrix() / 6.0;
  const SymMatrix L = normalized_laplacian(g);
  CHECK(max_abs(solve_logdet(L, g.degrees(), 1e-9).theta_hat.matrix() - p) < 1e-8);
  CHECK(max_abs(solve_entropy(L, g.degrees(), 1e-9).theta_hat.matrix() - p) < 1e-8);
}

TEST_CASE("log-det P4 matches the numeric oracle") {
  const Graph p4 = path_graph(4);
  const SymMatrix L = normalized_laplacian(p4);
  const RegSolution closed = solve_logdet(L, p4.degrees(), 1.0);
  const RegSolution oracle = solve_numeric_oracle(L, p4.degrees(), 1.0, Penalty::kLogDet);
  CHECK(oracle.penalty == Penalty::kOracle);
  CHECK(rel_frob(oracle.theta_hat.matrix(), closed.theta_hat.matrix()) < 1e-6);
}

TEST_CASE("entropy closed form") {
  const Graph k4 = complete_graph(4);
  for (double eta : {0.1, 1.0, 30.0}) {
    CHECK(max_abs(solve_entropy(normalized_laplacian(k4), k4.degrees(), eta).theta_hat.matrix() -
                  k4_solution()) < 1e-12);
  }
  const Graph p4 = path_graph(4);
  const SymMatrix L = normalized_laplacian(p4);
  const RegSolution closed = solve_entropy(L, p4.degrees(), 2.0);
  const RegSolution oracle = solve_numeric_oracle(L, p4.degrees(), 2.0, Penalty::kEntropy);
  CHECK(rel_frob(oracle.theta_hat.matrix(), closed.theta_hat.matrix()) < 1e-5);
  // Heat-kernel form: P exp(-eta L) P normalized.
  const Eigen::MatrixXd heat =
      project_and_normalize(matrix_exp_sym(L, -2.0), p4.degrees()).matrix();
  CHECK(max_abs(heat - closed.theta_hat.matrix()) < 1e-12);
}

TEST_CASE("solvers minimize their own objectives against the oracle") {
  const Graph p4 = path_graph(4);
  const SymMatrix L = normalized_laplacian(p4);
  const RegSolution ld = solve_logdet(L, p4.degrees(), 1.0);
  const RegSolution en = solve_entropy(L, p4.degrees(), 2.0);
  const RegSolution old = solve_numeric_oracle(L, p4.degrees(), 1.0, Penalty::kLogDet);
  const RegSolution oen = solve_numeric_oracle(L, p4.degrees(), 2.0, Penalty::kEntropy);
  CHECK(std::abs(logdet_objective(L, ld.theta_hat, 1.0) - logdet_objective(L, old.theta_hat, 1.0)) < 1e-10);
  CHECK(std::abs(entropy_objective(L, en.theta_hat, 2.0) - entropy_objective(L, oen.theta_hat, 2.0)) < 1e-10);
}

TEST_CASE("oracle on K4") {
  const Graph k4 = complete_graph(4);
  const RegSolution s = solve_numeric_oracle(normalized_laplacian(k4), k4.degrees(), 1.0, Penalty::kLogDet);
  CHECK(max_abs(s.theta_hat.matrix() - k4_solution()) < 1e-9);
  CHECK(s.iterations > 0);
}

TEST_CASE("oracle contract") {
  const Graph k4 = complete_graph(4);
  const SymMatrix L = normalized_laplacian(k4);
  CHECK_THROWS_AS(solve_numeric_oracle(L, k4.degrees(), 1.0, Penalty::kNone), ParameterError);
  const Graph big = generate_lattice(6, 6);
  CHECK_THROWS_AS(solve_numeric_oracle(normalized_laplacian(big), big.degrees(), 1.0, Penalty::kLogDet),
                  ParameterError);
  OracleOptions tight;
  tight.max_iterations = 2;
  Rng rng(32);
  const Graph g = random_connected_graph(8, rng);
  try {
    solve_numeric_oracle(normalized_laplacian(g), g.degrees(), 3.0, Penalty::kLogDet, tight);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.residual() > 0.0);
  }
}

TEST_CASE("unregularized solution") {
  const Graph p4 = path_graph(4);
  const RegSolution s = solve_unregularized(normalized_laplacian(p4), p4.degrees());
  CHECK(s.theta_hat.trace() == doctest::Approx(1.0));
  CHECK(numerical_rank(eig_sym(s.theta_hat)) == 1);
  const Graph k4 = complete_graph(4);
  CHECK_THROWS_AS(solve_unregularized(normalized_laplacian(k4), k4.degrees()), AmbiguityError);
}

TEST_CASE("unregularized solution on the lattice splits the long axis") {
  const Graph g = generate_lattice(6, 7);
  const RegSolution s = solve_unregularized(normalized_laplacian(g), g.degrees());
  const Spectrum sp = eig_sym(s.theta_hat);
  const Eigen::VectorXd u = sp.vectors.col(sp.size() - 1);
  const Cut cut = sweep_cut(u, 0.0);
  // Rows 0-2 land on one side, rows 4-6 on the other; the middle row sits on
  // the nodal line and may go either way.
  auto side = [&](int node) { return u(node) >= 0.0; };
  for (int x = 0; x < 6; ++x) {
    for (int y = 0; y < 3; ++y) {
      CHECK(side(y * 6 + x) == side(0));
      CHECK(side((6 - y) * 6 + x) != side(0));
    }
  }
  CHECK(cut.side_c.size() + cut.side_complement.size() == 42);
}

TEST_CASE("eta must be positive") {
  const Graph p4 = path_graph(4);
  const SymMatrix L = normalized_laplacian(p4);
  for (double bad : {0.0, -1.0, std::nan(""), double(INFINITY)}) {
    CHECK_THROWS_AS(solve_logdet(L, p4.degrees(), bad), ParameterError);
    CHECK_THROWS_AS(solve_entropy(L, p4.degrees(), bad), ParameterError);
  }
}

TEST_CASE("L must annihilate D^{1/2}1") {
  const Graph p4 = path_graph(4);
  CHECK_THROWS_AS(solve_logdet(normalized_laplacian(p4), Eigen::VectorXd::Ones(4), 1.0), DomainError);
}

TEST_CASE("disconnected graphs are solved and flagged") {
  const Graph g(6, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}, {3, 4, 1}, {4, 5, 1}, {5, 3, 1}});
  const SymMatrix L = normalized_laplacian(g);
  const RegSolution s = solve_logdet(L, g.degrees(), 1.0);
  CHECK(s.disconnected);
  const Feasibility f = check_feasibility(s.theta_hat, g.degrees());
  CHECK(f.trace_error < 1e-12);
  CHECK(f.nullspace_residual < 1e-12);
  CHECK(f.rank == 5);
  const RegSolution r = solve_logdet(L, g.degrees(), 1.0, Support::kRange);
  CHECK(check_feasibility(r.theta_hat, g.degrees()).rank == 4);
}

TEST_CASE("gamma and nu") {
  CHECK(gamma_for_nu(1.0) == 0.5);
  for (double g : {0.01, 0.15, 0.5, 0.93}) CHECK(gamma_for_nu(nu_for_gamma(g)) == doctest::Approx(g));
  CHECK_THROWS_AS(gamma_for_nu(0.0), ParameterError);
  CHECK_THROWS_AS(gamma_for_nu(-0.1), ParameterError);
  CHECK_THROWS_AS(nu_for_gamma(1.0), ParameterError);
}

TEST_CASE("P4 log-det solution is a normalized symmetrized PageRank matrix") {
  const Graph p4 = path_graph(4);
  const SymMatrix L = normalized_laplacian(p4);
  const RegSolution s = solve_logdet(L, p4.degrees(), 1.0);
  REQUIRE(s.nu > 0.0);
  const double gamma = gamma_for_nu(s.nu);
  const SymMatrix pr = project_and_normalize(symmetrized_pagerank(NormalizedSpectrum(p4), gamma), p4.degrees());
  CHECK((pr.matrix() - s.theta_hat.matrix()).norm() < 1e-8);
}

TEST_CASE("trace equation root") {
  Eigen::VectorXd v(3);
  v << 4.0 / 3, 4.0 / 3, 4.0 / 3;
  CHECK(solve_shift(v, 2.0) == doctest::Approx(1.5));
  CHECK_THROWS_AS(solve_shift(Eigen::VectorXd(), 1.0), ParameterError);
}

TEST_CASE("penalty names") {
  CHECK(penalty_name(Penalty::kLogDet) == "logdet");
  CHECK(penalty_name(Penalty::kEntropy) == "entropy");
  CHECK(penalty_name(Penalty::kNone) == "none");
  CHECK(penalty_name(Penalty::kOracle) == "oracle");
}
