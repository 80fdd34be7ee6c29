#include "gfb/reference.hpp"

#include <cmath>

#include "gfb/solver.hpp"

namespace gfb::reference {

namespace {

const ResolventOperator& res(const ProblemInstance& p, int node) {
  return *p.resolvents[node - 1];
}

const ForwardOperator& fwd(const ProblemInstance& p, int j) { return *p.forwards[j - 1]; }

void davis_yin(const ProblemInstance& p, State& s) {
  const double g = s.gamma, t = s.theta;
  Vec w = s.w.col(0);
  Vec x1 = res(p, 1).resolve(g, w);
  Vec x2 = res(p, 2).resolve(g, 2 * x1 - w - g * fwd(p, 1).apply(x1));
  s.w.col(0) = w + t * (x2 - x1);
  s.x.col(0) = x1;
  s.x.col(1) = x2;
}

void sequential_fdr(const ProblemInstance& p, State& s) {
  const int n = p.order();
  const double g = s.gamma, t = s.theta;
  s.x.col(0) = res(p, 1).resolve(g, s.w.col(0));
  for (int i = 2; i <= n - 1; ++i) {
    Vec prev = s.x.col(i - 2);
    Vec arg = prev - (g / 2) * fwd(p, i - 1).apply(prev) + (s.w.col(i - 1) - s.w.col(i - 2)) / 2;
    s.x.col(i - 1) = res(p, i).resolve(g / 2, arg);
  }
  Vec prev = s.x.col(n - 2);
  s.x.col(n - 1) =
      res(p, n).resolve(g, 2 * prev - g * fwd(p, n - 1).apply(prev) - s.w.col(n - 2));
  for (int i = 1; i <= n - 1; ++i) s.w.col(i - 1) += t * (s.x.col(i) - s.x.col(i - 1));
}

void parallel_fdr(const ProblemInstance& p, State& s) {
  const int n = p.order();
  const double g = s.gamma, t = s.theta;
  Vec mean = s.w.rowwise().sum() / (n - 1);
  s.x.col(0) = res(p, 1).resolve(g / (n - 1), mean);
  const Vec x1 = s.x.col(0);
  for (int i = 2; i <= n; ++i)
    s.x.col(i - 1) =
        res(p, i).resolve(g, 2 * x1 - g * fwd(p, i - 1).apply(x1) - s.w.col(i - 2));
  for (int i = 1; i <= n - 1; ++i) s.w.col(i - 1) += t * (s.x.col(i) - x1);
}

void ring_fb(const ProblemInstance& p, State& s) {
  const int n = p.order();
  const double g = s.gamma, t = s.theta;
  s.x.col(0) = res(p, 1).resolve(g, s.w.col(0));
  for (int i = 2; i <= n - 1; ++i) {
    Vec prev = s.x.col(i - 2);
    Vec arg = prev + s.w.col(i - 1) - s.w.col(i - 2) - g * fwd(p, i - 1).apply(prev);
    s.x.col(i - 1) = res(p, i).resolve(g, arg);
  }
  Vec prev = s.x.col(n - 2);
  Vec arg = s.x.col(0) + prev - s.w.col(n - 2) - g * fwd(p, n - 1).apply(prev);
  s.x.col(n - 1) = res(p, n).resolve(g, arg);
  for (int i = 1; i <= n - 1; ++i) s.w.col(i - 1) += t * (s.x.col(i) - s.x.col(i - 1));
}

void four_operator(const ProblemInstance& p, State& s) {
  const double g = s.gamma, t = s.theta;
  Vec w1 = s.w.col(0), w2 = s.w.col(1);
  Vec x1 = res(p, 1).resolve(g / 2, w1 / 2);
  Vec x2 = res(p, 2).resolve(g / 2, x1 + w2 / 2);
  const Vec& probe = (s.p3 == 1) ? x1 : x2;
  Vec x3 = res(p, 3).resolve(
      g / 2, x1 + x2 - (g / 2) * fwd(p, 2).apply(probe) - w1 / 2 - w2 / 2);
  s.w.col(0) = w1 + t * (x3 - x1);
  s.w.col(1) = w2 + t * (x3 - x2);
  s.x.col(0) = x1;
  s.x.col(1) = x2;
  s.x.col(2) = x3;
}

// Limit case of the minimal-lifting scheme with one cocoercive operator,
// evaluated at x_1; here s.w holds the u variables and s.gamma the stepsize
// lambda.
void biparallel_limit(const ProblemInstance& p, State& s) {
  const int n = p.order();
  const double lam = s.gamma, t = s.theta;
  s.x.col(0) = res(p, 1).resolve(lam, s.w.col(0));
  for (int i = 2; i <= n - 1; ++i)
    s.x.col(i - 1) =
        res(p, i).resolve(lam * (n - 1) / 2, s.x.col(0) + ((n - 1) / 2.0) * s.w.col(i - 1));
  Vec sum = Vec::Zero(p.dim);
  for (int i = 1; i <= n - 1; ++i) sum += s.x.col(i - 1);
  Vec usum = Vec::Zero(p.dim);
  for (int j = 1; j <= n - 1; ++j) usum += s.w.col(j - 1);
  s.x.col(n - 1) = res(p, n).resolve(
      lam, (2.0 / (n - 1)) * sum - lam * fwd(p, n - 1).apply(s.x.col(0)) - usum);
  for (int i = 1; i <= n - 1; ++i)
    s.w.col(i - 1) -= t * (s.x.col(i - 1) - s.x.col(n - 1));
}

}  // namespace

State make_state(PresetKind kind, const ProblemInstance& prob, const Eigen::MatrixXd& w0,
                 double gamma, double theta) {
  const int n = prob.order();
  State s;
  s.x = Eigen::MatrixXd::Zero(prob.dim, n);
  switch (kind) {
    case PresetKind::ring:
      s.w = w0 / 2;
      s.gamma = gamma / 2;
      s.theta = theta / 2;
      s.w_scale = 2.0;
      break;
    case PresetKind::biparallel_limit:
      s.w = w0 / (n - 1);
      s.gamma = gamma / (n - 1);
      s.theta = theta / (n - 1);
      s.w_scale = n - 1;
      break;
    case PresetKind::four_op_1:
    case PresetKind::four_op_2:
      s.w = w0;
      s.gamma = gamma;
      s.theta = theta;
      s.p3 = (kind == PresetKind::four_op_1) ? 1 : 2;
      break;
    default:
      s.w = w0;
      s.gamma = gamma;
      s.theta = theta;
      break;
  }
  return s;
}

void advance(PresetKind kind, const ProblemInstance& prob, State& s) {
  switch (kind) {
    case PresetKind::davis_yin: davis_yin(prob, s); return;
    case PresetKind::sequential: sequential_fdr(prob, s); return;
    case PresetKind::parallel: parallel_fdr(prob, s); return;
    case PresetKind::ring: ring_fb(prob, s); return;
    case PresetKind::four_op_1:
    case PresetKind::four_op_2: four_operator(prob, s); return;
    case PresetKind::biparallel_limit: biparallel_limit(prob, s); return;
    default:
      throw Error("no hand-coded reference for preset " + preset_name(kind));
  }
}

double deviation(PresetKind, const SolverState& engine, const State& s) {
  const double dx = (engine.x - s.x).cwiseAbs().maxCoeff();
  const double dw = (engine.w - s.w_scale * s.w).cwiseAbs().maxCoeff();
  return std::max(dx, dw);
}

Eigen::MatrixXd graph_drs_step(
    const std::vector<std::shared_ptr<const ResolventOperator>>& resolvents,
    const GraphTriple& triple, Eigen::MatrixXd& w, double gamma, double theta) {
  const int n = triple.order();
  const int d = static_cast<int>(w.rows());
  Eigen::MatrixXd x(d, n);
  for (int i = 1; i <= n; ++i) {
    const double di = triple.degree(i);
    Vec arg = Vec::Zero(d);
    for (int h : triple.g.in_neighbors(i)) arg += x.col(h - 1);
    arg *= 2.0 / di;
    for (int j = 0; j < n - 1; ++j)
      if (triple.z(i - 1, j) != 0.0) arg += (triple.z(i - 1, j) / di) * w.col(j);
    x.col(i - 1) = resolvents[i - 1]->resolve(gamma / di, arg);
  }
  for (int j = 0; j < n - 1; ++j) {
    Vec upd = Vec::Zero(d);
    for (int i = 1; i <= n; ++i)
      if (triple.z(i - 1, j) != 0.0) upd += triple.z(i - 1, j) * x.col(i - 1);
    w.col(j) -= theta * upd;
  }
  return x;
}

}  // namespace gfb::reference
