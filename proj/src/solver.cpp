#include "gfb/solver.hpp"

#include <chrono>
#include <cmath>

#include "gfb/instances.hpp"
#include "gfb/reference.hpp"
#include "gfb/rng.hpp"

namespace gfb {

RelaxationSchedule::RelaxationSchedule(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw Error("relaxation schedule must be nonempty");
}

ValidatedConfig validate_config(const SolverConfig& cfg, double beta) {
  if (!(beta > 0)) throw Error("beta must be positive");
  if (!(cfg.gamma > 0) || !(cfg.gamma < 4 * beta))
    throw StepsizeOutOfRange("gamma = " + std::to_string(cfg.gamma) +
                             " outside ]0, 4 beta[ = ]0, " + std::to_string(4 * beta) + "[");
  ValidatedConfig out;
  out.theta_bound = (4 * beta - cfg.gamma) / (2 * beta);
  const auto& vals = cfg.theta.values();
  for (std::size_t k = 0; k < vals.size(); ++k) {
    if (!(vals[k] > 0) || vals[k] > out.theta_bound)
      throw RelaxationOutOfRange("theta_" + std::to_string(k) + " = " + std::to_string(vals[k]) +
                                 " outside ]0, " + std::to_string(out.theta_bound) + "]");
  }
  out.divergence_unverified = cfg.theta.tail() >= out.theta_bound;
  return out;
}

SolverState SolverState::init(int dim, int n, const Eigen::MatrixXd& w0) {
  if (w0.rows() != dim || w0.cols() != n - 1)
    throw DimensionMismatch("w0 must be dim x (n-1)");
  SolverState s;
  s.w = w0;
  s.x = Eigen::MatrixXd::Zero(dim, n);
  return s;
}

SolverState SolverState::init_broadcast(int dim, int n, const Vec& w0) {
  if (w0.size() != dim) throw DimensionMismatch("w0 must have the problem dimension");
  return init(dim, n, w0.replicate(1, n - 1));
}

void step(SolverState& state, const ProblemInstance& prob, const GraphTriple& triple,
          double gamma, double theta_k, StepAudit* audit) {
  const int n = triple.order();
  const int d = prob.dim;
  if (prob.order() != n) throw DimensionMismatch("operator count differs from graph order");
  if (state.w.rows() != d || state.w.cols() != n - 1 || state.x.rows() != d ||
      state.x.cols() != n)
    throw DimensionMismatch("state dimensions inconsistent with problem and triple");

  if (audit) {
    audit->resolvent_args.resize(d, n);
    audit->resolvent_outs.resize(d, n);
    audit->sigmas.assign(n, 0.0);
    audit->forward_args.resize(d, n - 1);
    audit->forward_vals.resize(d, n - 1);
    audit->resolvent_calls = 0;
    audit->forward_calls = 0;
  }

  Eigen::MatrixXd xn(d, n);
  Vec arg(d);
  for (int i = 1; i <= n; ++i) {
    const double di = triple.degree(i);
    if (i == 1) {
      arg = (1.0 / di) * (state.w * triple.z.row(0).transpose());
    } else {
      arg.setZero();
      for (int h : triple.g.in_neighbors(i)) arg += xn.col(h - 1);
      const Vec& probe = xn.col(triple.p[i] - 1);
      Vec bval = prob.forwards[i - 2]->apply(probe);
      if (audit) {
        audit->forward_args.col(i - 2) = probe;
        audit->forward_vals.col(i - 2) = bval;
        ++audit->forward_calls;
      }
      arg = (2.0 / di) * arg - (gamma / di) * bval +
            (1.0 / di) * (state.w * triple.z.row(i - 1).transpose());
    }
    const double sigma = gamma / di;
    xn.col(i - 1) = prob.resolvents[i - 1]->resolve(sigma, arg);
    if (audit) {
      audit->resolvent_args.col(i - 1) = arg;
      audit->resolvent_outs.col(i - 1) = xn.col(i - 1);
      audit->sigmas[i - 1] = sigma;
      ++audit->resolvent_calls;
    }
  }
  state.w.noalias() -= theta_k * (xn * triple.z);
  state.last_residual = (xn - state.x).colwise().norm().maxCoeff();
  state.x = std::move(xn);
  ++state.k;
}

void step(SolverState& state, const ProblemInstance& prob, const GraphTriple& triple,
          const SolverConfig& cfg, StepAudit* audit) {
  validate_config(cfg, prob.beta);
  step(state, prob, triple, cfg.gamma, cfg.theta.at(state.k), audit);
}

namespace {

RunResult finish(SolverState&& s, const SolverConfig& cfg, std::vector<double>&& trace,
                 std::chrono::steady_clock::time_point start) {
  RunResult r;
  r.iterations = s.k;
  r.converged = s.last_residual < cfg.tol;
  r.final_residual = s.last_residual;
  r.x_star = s.x.col(s.x.cols() - 1);
  r.w_star = std::move(s.w);
  r.x_final = std::move(s.x);
  r.residual_trace = std::move(trace);
  r.wall_time_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return r;
}

}  // namespace

RunResult run(const ProblemInstance& prob, const GraphTriple& triple, const SolverConfig& cfg,
              const Eigen::MatrixXd& w0) {
  validate_config(cfg, prob.beta);
  const auto start = std::chrono::steady_clock::now();
  SolverState s = SolverState::init(prob.dim, triple.order(), w0);
  std::vector<double> trace;
  if (cfg.record_trace) trace.reserve(static_cast<std::size_t>(std::min(cfg.max_iters, 1L << 20)));
  for (long k = 0; k < cfg.max_iters; ++k) {
    step(s, prob, triple, cfg.gamma, cfg.theta.at(k));
    if (cfg.record_trace) trace.push_back(s.last_residual);
    if (s.last_residual < cfg.tol) break;
  }
  return finish(std::move(s), cfg, std::move(trace), start);
}

RunResult run(const ProblemInstance& prob, const GraphTriple& triple, const SolverConfig& cfg,
              const Vec& w0) {
  const Eigen::MatrixXd broadcast = w0.replicate(1, triple.order() - 1);
  return run(prob, triple, cfg, broadcast);
}

ReductionReport reduction_check(PresetKind kind, int n, int trials, int dim, std::uint64_t seed,
                                int iters) {
  ReductionReport report{kind, n, trials, iters, 0.0};
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(Rng::mix({seed, static_cast<std::uint64_t>(trial), 0xFEEDULL}));
    InstanceOptions opts;
    if (kind == PresetKind::four_op_1 || kind == PresetKind::four_op_2) opts.zero_forward_head = true;
    if (kind == PresetKind::biparallel_limit) opts.single_tail_forward = true;
    ProblemInstance prob = make_random_instance(rng, n, dim, opts);
    const GraphTriple triple = preset_triple(kind, n);

    const double beta = prob.beta;
    const double gamma = rng.uniform(0.5, 3.4) * beta;
    const double theta = rng.uniform(0.1, 0.95) * (4 * beta - gamma) / (2 * beta);
    const Eigen::MatrixXd w0 = uniform_matrix(rng, dim, n - 1, -1.0, 1.0);

    SolverState engine = SolverState::init(dim, n, w0);
    reference::State ref = reference::make_state(kind, prob, w0, gamma, theta);
    for (int k = 0; k < iters; ++k) {
      step(engine, prob, triple, gamma, theta);
      reference::advance(kind, prob, ref);
      report.max_deviation =
          std::max(report.max_deviation, reference::deviation(kind, engine, ref));
    }
  }
  return report;
}

}  // namespace gfb
