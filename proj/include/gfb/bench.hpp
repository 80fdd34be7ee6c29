#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gfb/graph.hpp"
#include "gfb/operators.hpp"

namespace gfb {

struct ExperimentSpec {
  int dim = 200;
  std::vector<int> n_range;  // operator counts
  int problems_per_n = 10;
  int starts_per_problem = 10;
  std::vector<PresetKind> methods{PresetKind::ring, PresetKind::sequential, PresetKind::parallel,
                                  PresetKind::complete_seq, PresetKind::complete_par};
  double tol = 1e-8;
  double theta = 0.99;       // gamma is always 2 beta
  long max_iters = 200000;
  std::uint64_t seed = 1;
  int threads = 1;
};

// Random feasibility instance: minimize a sum of convex quadratics over an
// intersection of balls sharing the interior point z; starting vectors lie
// outside every ball.
struct GeneratedProblem {
  int dim = 0;
  int n = 0;
  Vec z;
  std::vector<Vec> centers;          // n
  std::vector<double> radii;         // n
  std::vector<double> epsilons;      // n, radius margins
  std::vector<Eigen::MatrixXd> qs;   // n-1 PSD matrices
  double beta = 0.0;                 // min_j 1/||Q_j||_2
  std::vector<Vec> w0s;              // starting vectors

  ProblemInstance to_instance() const;
};

// RNG streams are derived from (seed, n, problem_id) for the instance and
// (seed, n, problem_id, start_id) for each start, so instances are
// reproducible independently of execution order. Invariants are verified
// post-hoc; regeneration is bounded at 100 attempts.
GeneratedProblem generate_problem(int dim, int n, int n_starts, std::uint64_t seed,
                                  int problem_id);

struct ResultRow {
  std::string method;
  int n = 0;
  int problem_id = 0;
  int start_id = 0;
  long iterations = 0;
  double wall_time_ms = 0.0;
  double final_residual = 0.0;
  bool converged = false;
};

struct ResultTable {
  std::vector<ResultRow> rows;  // sorted by (method, n, problem_id, start_id)
};

// Runs every (n, problem, start, method) combination; methods share the
// generated instances. Runs may execute on several threads; rows are
// order-normalized before return.
ResultTable run_experiment(const ExperimentSpec& spec);

struct SummaryRow {
  std::string method;
  int n = 0;
  double median_iters = 0.0;
  long min_iters = 0;
  long max_iters = 0;
  double median_time_ms = 0.0;
  double alg_connectivity = 0.0;  // of the method's G'
};

// Per-(method, n) medians and ranges, sorted by (n, median_iters) so each
// n-block reads as a ranking.
std::vector<SummaryRow> summarize(const ResultTable& table);

void write_results_csv(std::ostream& os, const ResultTable& table);
void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);

}  // namespace gfb
