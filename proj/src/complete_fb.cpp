#include "gfb/complete_fb.hpp"

#include <chrono>
#include <cmath>

namespace gfb {

CompleteCoefficients complete_coefficients(int n) {
  if (n < 2) throw OrderTooSmall("complete method needs n >= 2");
  CompleteCoefficients c;
  c.n = n;
  c.a.resize(n - 1);
  c.t.resize(n - 1);
  for (int i = 1; i <= n - 1; ++i) {
    c.a[i - 1] = std::sqrt(static_cast<double>(n - i) * n / (n - i + 1));
    c.t[i - 1] = -std::sqrt(static_cast<double>(n) / ((n - i) * (n - i + 1)));
  }
  return c;
}

ValidatedCompleteConfig validate_complete_config(const CompleteConfig& cfg, double beta, int n) {
  if (n < 2) throw OrderTooSmall("complete method needs n >= 2");
  if (!(beta > 0)) throw Error("beta must be positive");
  const double lambda_bound = 4 * beta / (n - 1);
  if (!(cfg.lambda > 0) || !(cfg.lambda < lambda_bound))
    throw StepsizeOutOfRange("lambda = " + std::to_string(cfg.lambda) + " outside ]0, " +
                             std::to_string(lambda_bound) + "[");
  ValidatedCompleteConfig out;
  out.mu_bound = (2.0 / (n - 1) - cfg.lambda / (2 * beta)) * n;
  const auto& vals = cfg.mu.values();
  for (std::size_t k = 0; k < vals.size(); ++k) {
    if (!(vals[k] > 0) || vals[k] > out.mu_bound)
      throw RelaxationOutOfRange("mu_" + std::to_string(k) + " = " + std::to_string(vals[k]) +
                                 " outside ]0, " + std::to_string(out.mu_bound) + "]");
  }
  out.divergence_unverified = cfg.mu.tail() >= out.mu_bound;
  return out;
}

CompleteState CompleteState::init(int dim, int n, const Eigen::MatrixXd& u0) {
  if (u0.rows() != dim || u0.cols() != n - 1)
    throw DimensionMismatch("u0 must be dim x (n-1)");
  CompleteState s;
  s.u = u0;
  s.x = Eigen::MatrixXd::Zero(dim, n);
  return s;
}

void step_complete(CompleteState& state, const ProblemInstance& prob,
                   const std::vector<int>& pred, double lambda, double mu_k) {
  const int n = prob.order();
  const int d = prob.dim;
  if (static_cast<int>(pred.size()) != n + 1)
    throw DimensionMismatch("predecessor map must be node-indexed with size n+1");
  if (state.u.rows() != d || state.u.cols() != n - 1 || state.x.rows() != d ||
      state.x.cols() != n)
    throw DimensionMismatch("state dimensions inconsistent with problem");
  for (int i = 2; i <= n; ++i)
    if (pred[i] < 1 || pred[i] >= i) throw InDegreeViolation("predecessor of node " +
                                                             std::to_string(i) + " invalid");

  Eigen::MatrixXd xn(d, n);
  Vec xsum = Vec::Zero(d);  // sum of x_h for h < i
  Vec usum = Vec::Zero(d);  // sum of u_j / (n - j) for j < i
  Vec arg(d);
  for (int i = 1; i <= n; ++i) {
    if (i == 1) {
      arg = state.u.col(0);
    } else {
      arg = (2.0 / (n - 1)) * xsum -
            lambda * prob.forwards[i - 2]->apply(xn.col(pred[i] - 1)) - usum;
      if (i <= n - 1) arg += state.u.col(i - 1);
    }
    xn.col(i - 1) = prob.resolvents[i - 1]->resolve(lambda, arg);
    xsum += xn.col(i - 1);
    if (i <= n - 1) usum += state.u.col(i - 1) / (n - i);
  }

  // u_i -= mu ((n-i)/(n-i+1) x_i - 1/(n-i+1) sum_{j>i} x_j)
  Vec tail = xn.col(n - 1);
  for (int i = n - 1; i >= 1; --i) {
    state.u.col(i - 1) -=
        mu_k * ((static_cast<double>(n - i) / (n - i + 1)) * xn.col(i - 1) - tail / (n - i + 1));
    tail += xn.col(i - 1);
  }
  state.last_residual = (xn - state.x).colwise().norm().maxCoeff();
  state.x = std::move(xn);
  ++state.k;
}

RunResult run_complete(const ProblemInstance& prob, const std::vector<int>& pred,
                       const CompleteConfig& cfg, const Eigen::MatrixXd& u0) {
  const int n = prob.order();
  validate_complete_config(cfg, prob.beta, n);
  const auto start = std::chrono::steady_clock::now();
  CompleteState s = CompleteState::init(prob.dim, n, u0);
  std::vector<double> trace;
  for (long k = 0; k < cfg.max_iters; ++k) {
    step_complete(s, prob, pred, cfg.lambda, cfg.mu.at(k));
    if (cfg.record_trace) trace.push_back(s.last_residual);
    if (s.last_residual < cfg.tol) break;
  }
  RunResult r;
  r.iterations = s.k;
  r.converged = s.last_residual < cfg.tol;
  r.final_residual = s.last_residual;
  r.x_star = s.x.col(n - 1);
  r.w_star = std::move(s.u);
  r.x_final = std::move(s.x);
  r.residual_trace = std::move(trace);
  r.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

RunResult run_complete(const ProblemInstance& prob, const std::vector<int>& pred,
                       const CompleteConfig& cfg, const Vec& u0) {
  const Eigen::MatrixXd broadcast = u0.replicate(1, prob.order() - 1);
  return run_complete(prob, pred, cfg, broadcast);
}

Eigen::MatrixXd u_from_w(const Eigen::MatrixXd& w) {
  const int n = static_cast<int>(w.cols()) + 1;
  const CompleteCoefficients c = complete_coefficients(n);
  Eigen::MatrixXd u = w;
  for (int j = 0; j < n - 1; ++j) u.col(j) *= c.a[j] / (n - 1);
  return u;
}

}  // namespace gfb
