#pragma once

#include <Eigen/Core>
#include <vector>

#include "gfb/solver.hpp"

namespace gfb {

// Coefficients of the closed-form decomposition of the complete graph's
// Laplacian: a_i = sqrt((n-i)n/(n-i+1)), t_i = -sqrt(n/((n-i)(n-i+1))); they
// satisfy a_i^2 = t_i^2 + a_{i+1}^2 and a_{n-1} = -t_{n-1} = sqrt(n/2).
struct CompleteCoefficients {
  int n = 0;
  std::vector<double> a;  // a_1..a_{n-1}
  std::vector<double> t;  // t_1..t_{n-1}
};

CompleteCoefficients complete_coefficients(int n);

struct CompleteConfig {
  double lambda = 0.5;         // stepsize, lambda = gamma/(n-1)
  RelaxationSchedule mu{0.99};  // relaxation mu_k = n/(n-1) theta_k
  double tol = 1e-8;
  long max_iters = 100000;
  bool record_trace = false;
};

struct ValidatedCompleteConfig {
  double mu_bound = 0.0;  // (2/(n-1) - lambda/(2 beta)) n
  bool divergence_unverified = false;
};

// Checks lambda in (0, 4 beta/(n-1)) and every mu_k in (0, mu_bound].
ValidatedCompleteConfig validate_complete_config(const CompleteConfig& cfg, double beta, int n);

struct CompleteState {
  Eigen::MatrixXd u;  // d x (n-1)
  Eigen::MatrixXd x;  // d x n
  long k = 0;
  double last_residual = std::numeric_limits<double>::infinity();

  static CompleteState init(int dim, int n, const Eigen::MatrixXd& u0);
};

// One iteration of the complete forward-backward method with rational
// coefficients. `pred` is a node-indexed predecessor map (any assignment with
// p(i) < i is admissible inside the complete graph).
void step_complete(CompleteState& state, const ProblemInstance& prob,
                   const std::vector<int>& pred, double lambda, double mu_k);

RunResult run_complete(const ProblemInstance& prob, const std::vector<int>& pred,
                       const CompleteConfig& cfg, const Eigen::MatrixXd& u0);

// Broadcast form.
RunResult run_complete(const ProblemInstance& prob, const std::vector<int>& pred,
                       const CompleteConfig& cfg, const Vec& u0);

// Governing variables of the generic engine mapped into Algorithm 2's
// coordinates: u_j = a_j/(n-1) w_j.
Eigen::MatrixXd u_from_w(const Eigen::MatrixXd& w);

}  // namespace gfb
