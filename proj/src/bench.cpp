#include "gfb/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <ostream>
#include <thread>

#include "gfb/complete_fb.hpp"
#include "gfb/rng.hpp"
#include "gfb/solver.hpp"

namespace gfb {

ProblemInstance GeneratedProblem::to_instance() const {
  std::vector<std::shared_ptr<const ResolventOperator>> as;
  as.reserve(n);
  for (int i = 0; i < n; ++i) as.push_back(std::make_shared<BallNormalCone>(centers[i], radii[i]));
  std::vector<std::shared_ptr<const ForwardOperator>> bs;
  bs.reserve(n - 1);
  for (int j = 0; j < n - 1; ++j)
    bs.push_back(std::make_shared<QuadraticGradient>(qs[j], estimate_cocoercivity(qs[j])));
  return ProblemInstance::make(dim, std::move(as), std::move(bs), beta);
}

namespace {

bool problem_valid(const GeneratedProblem& p) {
  const double zn = p.z.norm();
  for (int i = 0; i < p.n; ++i) {
    const double dist = (p.z - p.centers[i]).norm();
    if (dist < zn / 6 || dist > zn / 3) return false;
    if (!(p.epsilons[i] > 0) || p.epsilons[i] >= zn / 6) return false;
    if (p.radii[i] <= dist) return false;               // z interior
    if (p.centers[i].norm() <= p.radii[i]) return false;  // origin excluded
  }
  for (const Vec& w0 : p.w0s)
    for (int i = 0; i < p.n; ++i)
      if ((w0 - p.centers[i]).norm() <= p.radii[i]) return false;  // start outside every ball
  return true;
}

GeneratedProblem generate_once(int dim, int n, int n_starts, std::uint64_t seed, int problem_id,
                               int attempt) {
  Rng rng(Rng::mix({seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(problem_id),
                    0xFFFFULL, static_cast<std::uint64_t>(attempt)}));
  GeneratedProblem p;
  p.dim = dim;
  p.n = n;
  p.z = uniform_vector(rng, dim, -10.0, 10.0);
  const double zn = p.z.norm();
  for (int i = 0; i < n; ++i) {
    const Vec dir = random_unit_vector(rng, dim);
    const double dist = rng.uniform(zn / 6, zn / 3);
    p.centers.push_back(p.z + dist * dir);
    const double eps = rng.uniform(0.0, zn / 6);
    p.epsilons.push_back(eps);
    p.radii.push_back((p.z - p.centers[i]).norm() + eps);
  }
  double beta = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n - 1; ++j) {
    Eigen::MatrixXd w(dim, dim);
    for (int c = 0; c < dim; ++c)
      for (int r = 0; r < dim; ++r) w(r, c) = rng.uniform(-0.5, 0.5);
    p.qs.push_back(0.5 * (w.transpose() * w));
    beta = std::min(beta, estimate_cocoercivity(p.qs.back()));
  }
  p.beta = beta;
  double reach = 0.0;
  for (int i = 0; i < n; ++i) reach = std::max(reach, 2 * p.radii[i] - p.epsilons[i]);
  for (int s = 0; s < n_starts; ++s) {
    Rng srng(Rng::mix({seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(problem_id),
                       static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(attempt)}));
    const Vec omega = random_unit_vector(srng, dim);
    const double eps = srng.uniform(0.0, 1.0);
    p.w0s.push_back(p.z + (reach + eps) * omega);
  }
  return p;
}

}  // namespace

GeneratedProblem generate_problem(int dim, int n, int n_starts, std::uint64_t seed,
                                  int problem_id) {
  if (dim < 2 || n < 2) throw Error("generate_problem needs dim >= 2 and n >= 2");
  for (int attempt = 0; attempt < 100; ++attempt) {
    GeneratedProblem p = generate_once(dim, n, n_starts, seed, problem_id, attempt);
    if (problem_valid(p)) return p;
  }
  throw GenerationFailure("could not generate a valid instance in 100 attempts");
}

namespace {

RunResult run_method(PresetKind kind, const ProblemInstance& prob, const Vec& w0,
                     const GraphTriple& triple, double tol, double theta, long max_iters) {
  const double gamma = 2 * prob.beta;
  if (kind == PresetKind::complete_seq || kind == PresetKind::complete_par) {
    const int n = prob.order();
    CompleteConfig cc;
    cc.lambda = gamma / (n - 1);
    cc.mu = RelaxationSchedule(theta * n / (n - 1));
    cc.tol = tol;
    cc.max_iters = max_iters;
    return run_complete(prob, triple.p, cc, u_from_w(w0.replicate(1, n - 1)));
  }
  SolverConfig sc;
  sc.gamma = gamma;
  sc.theta = RelaxationSchedule(theta);
  sc.tol = tol;
  sc.max_iters = max_iters;
  return run(prob, triple, sc, w0);
}

}  // namespace

ResultTable run_experiment(const ExperimentSpec& spec) {
  struct Job {
    int n, problem_id, start_id;
    PresetKind method;
  };
  std::vector<Job> jobs;
  for (int n : spec.n_range)
    for (int pid = 0; pid < spec.problems_per_n; ++pid)
      for (int sid = 0; sid < spec.starts_per_problem; ++sid)
        for (PresetKind m : spec.methods) jobs.push_back({n, pid, sid, m});

  // Instances are shared across methods and starts of one (n, problem_id).
  std::map<std::pair<int, int>, GeneratedProblem> problems;
  std::map<std::pair<int, int>, ProblemInstance> instances;
  for (int n : spec.n_range)
    for (int pid = 0; pid < spec.problems_per_n; ++pid) {
      auto key = std::make_pair(n, pid);
      problems.emplace(key,
                       generate_problem(spec.dim, n, spec.starts_per_problem, spec.seed, pid));
      instances.emplace(key, problems.at(key).to_instance());
    }
  std::map<int, std::map<PresetKind, GraphTriple>> triples;
  for (int n : spec.n_range)
    for (PresetKind m : spec.methods) triples[n].emplace(m, preset_triple(m, n));

  std::vector<ResultRow> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t j = next.fetch_add(1);
      if (j >= jobs.size()) return;
      const Job& job = jobs[j];
      const auto key = std::make_pair(job.n, job.problem_id);
      const GeneratedProblem& gp = problems.at(key);
      const RunResult res =
          run_method(job.method, instances.at(key), gp.w0s[job.start_id],
                     triples.at(job.n).at(job.method), spec.tol, spec.theta, spec.max_iters);
      rows[j] = ResultRow{preset_name(job.method), job.n,
                          job.problem_id, job.start_id, res.iterations,
                          res.wall_time_ms, res.final_residual, res.converged};
    }
  };
  const int nthreads = std::max(1, spec.threads);
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  ResultTable table;
  table.rows = std::move(rows);
  std::sort(table.rows.begin(), table.rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.method, a.n, a.problem_id, a.start_id) <
           std::tie(b.method, b.n, b.problem_id, b.start_id);
  });
  return table;
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

std::vector<SummaryRow> summarize(const ResultTable& table) {
  if (table.rows.empty()) throw EmptyTable("cannot summarize an empty result table");
  std::map<std::pair<int, std::string>, std::vector<const ResultRow*>> groups;
  for (const auto& r : table.rows) groups[{r.n, r.method}].push_back(&r);

  std::vector<SummaryRow> out;
  for (const auto& [key, rows] : groups) {
    SummaryRow s;
    s.n = key.first;
    s.method = key.second;
    std::vector<double> iters, times;
    s.min_iters = rows.front()->iterations;
    s.max_iters = rows.front()->iterations;
    for (const ResultRow* r : rows) {
      iters.push_back(static_cast<double>(r->iterations));
      times.push_back(r->wall_time_ms);
      s.min_iters = std::min(s.min_iters, r->iterations);
      s.max_iters = std::max(s.max_iters, r->iterations);
    }
    s.median_iters = median(std::move(iters));
    s.median_time_ms = median(std::move(times));
    s.alg_connectivity = algebraic_connectivity(preset_triple(parse_preset(s.method), s.n).gp);
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const SummaryRow& a, const SummaryRow& b) {
    return std::tie(a.n, a.median_iters, a.method) < std::tie(b.n, b.median_iters, b.method);
  });
  return out;
}

void write_results_csv(std::ostream& os, const ResultTable& table) {
  os << "method,n,problem_id,start_id,iterations,wall_time_ms,final_residual,converged\n";
  char buf[64];
  for (const auto& r : table.rows) {
    std::snprintf(buf, sizeof buf, "%.6f", r.wall_time_ms);
    os << r.method << ',' << r.n << ',' << r.problem_id << ',' << r.start_id << ','
       << r.iterations << ',' << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", r.final_residual);
    os << buf << ',' << (r.converged ? 1 : 0) << '\n';
  }
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
  os << "method,n,median_iters,min_iters,max_iters,median_time_ms,alg_connectivity\n";
  char buf[64];
  for (const auto& s : rows) {
    os << s.method << ',' << s.n << ',' << s.median_iters << ',' << s.min_iters << ','
       << s.max_iters << ',';
    std::snprintf(buf, sizeof buf, "%.6f", s.median_time_ms);
    os << buf << ',';
    std::snprintf(buf, sizeof buf, "%.12g", s.alg_connectivity);
    os << buf << '\n';
  }
}

}  // namespace gfb
