#pragma once

#include <Eigen/Core>
#include <limits>
#include <vector>

#include "gfb/graph.hpp"
#include "gfb/operators.hpp"

namespace gfb {

// Relaxation parameters theta_k: a constant or an explicit sequence. Past the
// end of an explicit sequence the last value repeats.
class RelaxationSchedule {
 public:
  RelaxationSchedule(double theta) : values_{theta} {}  // NOLINT: implicit by design
  explicit RelaxationSchedule(std::vector<double> values);

  double at(long k) const {
    return k < static_cast<long>(values_.size()) ? values_[k] : values_.back();
  }
  const std::vector<double>& values() const { return values_; }
  double tail() const { return values_.back(); }

 private:
  std::vector<double> values_;
};

struct SolverConfig {
  double gamma = 1.0;
  RelaxationSchedule theta{0.99};
  double tol = 1e-8;  // stopping: max_i ||x_i^{k+1} - x_i^k|| < tol
  long max_iters = 100000;
  bool record_trace = false;
};

struct ValidatedConfig {
  double theta_bound = 0.0;  // (4 beta - gamma) / (2 beta)
  // Set when the schedule's tail sits on the bound, in which case the
  // divergent-sum condition fails for constant schedules; the run is still
  // permitted under max_iters.
  bool divergence_unverified = false;
};

// Checks gamma in (0, 4 beta) and every theta_k in (0, (4 beta - gamma)/(2 beta)].
ValidatedConfig validate_config(const SolverConfig& cfg, double beta);

// Governing variables w (one column per j = 1..n-1) and the resolvent
// variables x of the previous iterate (one column per node).
struct SolverState {
  Eigen::MatrixXd w;  // d x (n-1)
  Eigen::MatrixXd x;  // d x n
  long k = 0;
  double last_residual = std::numeric_limits<double>::infinity();

  static SolverState init(int dim, int n, const Eigen::MatrixXd& w0);
  static SolverState init_broadcast(int dim, int n, const Vec& w0);
};

// Record of the operator calls made by one step, in call order.
struct StepAudit {
  Eigen::MatrixXd resolvent_args;   // d x n
  Eigen::MatrixXd resolvent_outs;   // d x n
  std::vector<double> sigmas;       // per node, gamma / d_i
  Eigen::MatrixXd forward_args;     // d x (n-1)
  Eigen::MatrixXd forward_vals;     // d x (n-1)
  long resolvent_calls = 0;
  long forward_calls = 0;
};

// One iteration of the graph forward-backward method: ascending resolvent
// sweep, then the governing update w -= theta_k x Z. Evaluates each resolvent
// and each forward operator exactly once.
void step(SolverState& state, const ProblemInstance& prob, const GraphTriple& triple,
          double gamma, double theta_k, StepAudit* audit = nullptr);

void step(SolverState& state, const ProblemInstance& prob, const GraphTriple& triple,
          const SolverConfig& cfg, StepAudit* audit = nullptr);

struct RunResult {
  Vec x_star;                  // consensus solution (x_n at exit)
  Eigen::MatrixXd w_star;      // d x (n-1)
  Eigen::MatrixXd x_final;     // d x n, all resolvent variables at exit
  long iterations = 0;
  double wall_time_ms = 0.0;
  std::vector<double> residual_trace;  // filled when record_trace is set
  bool converged = false;
  double final_residual = std::numeric_limits<double>::infinity();
};

// Iterates until max_i ||x_i^{k+1} - x_i^k|| < tol or max_iters. The first
// residual is measured against x^0 = 0. Not converging is an outcome, not an
// error.
RunResult run(const ProblemInstance& prob, const GraphTriple& triple, const SolverConfig& cfg,
              const Eigen::MatrixXd& w0);

// Broadcast form: one vector replicated to all n-1 governing slots.
RunResult run(const ProblemInstance& prob, const GraphTriple& triple, const SolverConfig& cfg,
              const Vec& w0);

// Compares the engine against an independently hand-coded iteration of the
// display equation associated with the preset, on random operators and
// starting points.
struct ReductionReport {
  PresetKind kind;
  int n = 0;
  int trials = 0;
  int iters_per_trial = 0;
  double max_deviation = 0.0;
};

ReductionReport reduction_check(PresetKind kind, int n, int trials, int dim = 3,
                                std::uint64_t seed = 1234, int iters = 20);

}  // namespace gfb
