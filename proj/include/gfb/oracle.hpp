#pragma once

#include <Eigen/Core>

#include "gfb/graph.hpp"
#include "gfb/operators.hpp"
#include "gfb/rng.hpp"
#include "gfb/solver.hpp"

namespace gfb {

// Product-space realization of the preconditioner M, its onto decomposition
// C, and the structure matrices entering the lifted operators. Everything is
// applied blockwise; the Kronecker factors are only materialized densely for
// tests. Immutable after build.
struct ProductOperatorBundle {
  ProblemInstance prob;
  GraphTriple triple;
  double gamma = 0.0;
  double tau = 0.0;  // 4 beta gamma / (4 beta - gamma)
  double beta = 0.0;

  Eigen::MatrixXd lap_gp;  // Lap(G')
  Eigen::MatrixXd p_bar;   // P of the complementary subgraph of G' in G
  Eigen::MatrixXd q_gp;    // Q(G')
  Eigen::MatrixXd r;       // P(G)

  int order() const { return triple.order(); }

  // tau B_D(x) + (tau/4beta) R x, the forward block of the lifted operator.
  Eigen::MatrixXd apply_forward_block(const Eigen::MatrixXd& xs) const;

  // Dense (2n-1)d realizations, for verification at small d.
  Eigen::MatrixXd dense_m(int d) const;
  Eigen::MatrixXd dense_c(int d) const;
};

// Validates gamma in (0, 4 beta), assembles the matrices and verifies the
// build-time identities (M = C C^T blockwise; the preconditioner collapse
// Lap(G') + P_bar + Q + (tau/4beta) R = (1 + tau/4beta) P(G)).
ProductOperatorBundle build_bundle(const ProblemInstance& prob, const GraphTriple& triple,
                                   double gamma);

// The unique (x, v) with [z, y] in (M + A + B)([x, v]), via the resolvent
// sweep of the inverse formulas; z is d x n, y is d x (n-1).
struct InverseStepResult {
  Eigen::MatrixXd x;  // d x n
  Eigen::MatrixXd v;  // d x (n-1)
};

InverseStepResult inverse_step(const ProductOperatorBundle& bundle, const Eigen::MatrixXd& z,
                               const Eigen::MatrixXd& y);

// One relaxed iteration of the reduced preconditioned proximal point scheme:
// computes (x, v) = inverse_step(Z y, y) and returns y - mu Z^T x.
struct RppaResult {
  Eigen::MatrixXd y_next;
  Eigen::MatrixXd x;
  Eigen::MatrixXd v;
};

RppaResult rppa_iterate(const ProductOperatorBundle& bundle, const Eigen::MatrixXd& y, double mu);

// Zero certificate at a candidate solution: recovers selections a_i in
// A_i(~x_star) from one extra traced sweep at the converged state, re-anchors
// each at x_star through the probe v_i = x_star + gamma a_i, and reports
// || sum a_i + sum B_j(x_star) ||.
struct ZeroCertificate {
  double certificate_norm = 0.0;
  bool pass = false;
  Eigen::MatrixXd a;  // d x n selections
  Eigen::MatrixXd b;  // d x (n-1) forward values at x_star
  double max_point_dev = 0.0;  // max_i || x_i' - x_star || over the probes
};

ZeroCertificate check_zero(const Vec& x_star, const Eigen::MatrixXd& a_candidates,
                           const ProblemInstance& prob, double gamma, double tol);

ZeroCertificate check_zero(const RunResult& result, const ProblemInstance& prob,
                           const GraphTriple& triple, double gamma, double tol);

// Samples the monotonicity inequality of the lifted forward operator:
// <tau db + (tau/4beta) R dx, dx> >= 0 on random pairs.
struct MonotonicityReport {
  int trials = 0;
  double min_slack = 0.0;
  bool pass = false;
};

MonotonicityReport monotonicity_sample(const ProductOperatorBundle& bundle, int trials, Rng& rng);

// The two-node witness showing the lifted forward operator is not cocoercive:
// with B_1 the identity, beta = 1 and gamma = 2 beta, the pair x = [x,0,0],
// x' = [0,x,0] has inner product 0 while the squared norm is 2||x||^2.
struct WitnessReport {
  double inner_product = 0.0;
  double squared_norm = 0.0;
  double expected_squared_norm = 0.0;
};

WitnessReport non_cocoercivity_witness(const Vec& x);

}  // namespace gfb
