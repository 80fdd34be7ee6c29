#include "gfb/oracle.hpp"

#include <cmath>

#include "gfb/instances.hpp"

namespace gfb {

Eigen::MatrixXd ProductOperatorBundle::apply_forward_block(const Eigen::MatrixXd& xs) const {
  const int n = order();
  const int d = prob.dim;
  if (xs.rows() != d || xs.cols() != n) throw DimensionMismatch("forward block: bad shape");
  Eigen::MatrixXd out = (tau / (4 * beta)) * (xs * r.transpose());
  for (int i = 2; i <= n; ++i)
    out.col(i - 1) += tau * prob.forwards[i - 2]->apply(xs.col(triple.p[i] - 1));
  return out;
}

Eigen::MatrixXd ProductOperatorBundle::dense_m(int d) const {
  const int n = order();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero((2 * n - 1) * d, (2 * n - 1) * d);
  auto kron_block = [&](const Eigen::MatrixXd& small, int row0, int col0) {
    for (int i = 0; i < small.rows(); ++i)
      for (int j = 0; j < small.cols(); ++j)
        m.block((row0 + i) * d, (col0 + j) * d, d, d) = small(i, j) * id;
  };
  kron_block(lap_gp, 0, 0);
  kron_block(triple.z, 0, n);
  kron_block(triple.z.transpose(), n, 0);
  kron_block(Eigen::MatrixXd::Identity(n - 1, n - 1), n, n);
  return m;
}

Eigen::MatrixXd ProductOperatorBundle::dense_c(int d) const {
  const int n = order();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero((2 * n - 1) * d, (n - 1) * d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n - 1; ++j) c.block(i * d, j * d, d, d) = triple.z(i, j) * id;
  for (int j = 0; j < n - 1; ++j) c.block((n + j) * d, j * d, d, d) = id;
  return c;
}

ProductOperatorBundle build_bundle(const ProblemInstance& prob, const GraphTriple& triple,
                                   double gamma) {
  const double beta = prob.beta;
  if (!(gamma > 0) || !(gamma < 4 * beta))
    throw StepsizeOutOfRange("gamma outside ]0, 4 beta[");
  if (prob.order() != triple.order())
    throw DimensionMismatch("operator count differs from graph order");

  ProductOperatorBundle b;
  b.prob = prob;
  b.triple = triple;
  b.gamma = gamma;
  b.beta = beta;
  b.tau = 4 * beta * gamma / (4 * beta - gamma);
  b.lap_gp = structure_matrices(triple.gp).laplacian.cast<double>();
  b.p_bar = structure_matrices(complement_subgraph(triple.g, triple.gp)).p.cast<double>();
  b.q_gp = structure_matrices(triple.gp).q.cast<double>();
  b.r = structure_matrices(triple.g).p.cast<double>();

  const double zz_err = (triple.z * triple.z.transpose() - b.lap_gp).cwiseAbs().maxCoeff();
  if (zz_err > 1e-10) throw Error("onto decomposition violates Z Z^T = Lap(G')");
  const double scale = 1 + b.tau / (4 * beta);
  const Eigen::MatrixXd lhs = b.lap_gp + b.p_bar + b.q_gp + (b.tau / (4 * beta)) * b.r;
  const Eigen::MatrixXd rhs = scale * structure_matrices(triple.g).p.cast<double>();
  if ((lhs - rhs).cwiseAbs().maxCoeff() > 1e-10)
    throw Error("preconditioner collapse identity violated");
  return b;
}

InverseStepResult inverse_step(const ProductOperatorBundle& b, const Eigen::MatrixXd& z,
                               const Eigen::MatrixXd& y) {
  const int n = b.order();
  const int d = b.prob.dim;
  if (z.rows() != d || z.cols() != n || y.rows() != d || y.cols() != n - 1)
    throw DimensionMismatch("inverse step: bad shapes");
  const double gt = b.gamma / b.tau;
  Eigen::MatrixXd x(d, n);
  for (int i = 1; i <= n; ++i) {
    const double di = b.triple.degree(i);
    Vec arg;
    if (i == 1) {
      arg = (gt / di) * z.col(0);
    } else {
      arg = Vec::Zero(d);
      for (int h : b.triple.g.in_neighbors(i)) arg += x.col(h - 1);
      arg *= 2.0 / di;
      arg -= (b.gamma / di) * b.prob.forwards[i - 2]->apply(x.col(b.triple.p[i] - 1));
      arg += (gt / di) * z.col(i - 1);
    }
    x.col(i - 1) = b.prob.resolvents[i - 1]->resolve(b.gamma / di, arg);
  }
  InverseStepResult out;
  out.v = y - 2.0 * (x * b.triple.z);
  out.x = std::move(x);
  return out;
}

RppaResult rppa_iterate(const ProductOperatorBundle& b, const Eigen::MatrixXd& y, double mu) {
  if (mu < 0 || mu > 2)
    throw RelaxationOutOfRange("rppa relaxation must lie in [0, 2]");
  const Eigen::MatrixXd z = y * b.triple.z.transpose();
  InverseStepResult inv = inverse_step(b, z, y);
  RppaResult out;
  out.y_next = y - mu * (inv.x * b.triple.z);
  out.x = std::move(inv.x);
  out.v = std::move(inv.v);
  return out;
}

ZeroCertificate check_zero(const Vec& x_star, const Eigen::MatrixXd& a_candidates,
                           const ProblemInstance& prob, double gamma, double tol) {
  const int n = prob.order();
  const int d = prob.dim;
  if (a_candidates.rows() != d || a_candidates.cols() != n)
    throw DimensionMismatch("candidate selections must be d x n");
  ZeroCertificate cert;
  cert.a.resize(d, n);
  cert.b.resize(d, n - 1);
  Vec sum = Vec::Zero(d);
  for (int i = 1; i <= n; ++i) {
    const Vec probe = x_star + gamma * a_candidates.col(i - 1);
    auto [xi, ai] = residual_element(*prob.resolvents[i - 1], gamma, probe);
    cert.a.col(i - 1) = ai;
    cert.max_point_dev = std::max(cert.max_point_dev, (xi - x_star).norm());
    sum += ai;
  }
  for (int j = 1; j <= n - 1; ++j) {
    cert.b.col(j - 1) = prob.forwards[j - 1]->apply(x_star);
    sum += cert.b.col(j - 1);
  }
  cert.certificate_norm = sum.norm();
  cert.pass = cert.certificate_norm < tol;
  return cert;
}

ZeroCertificate check_zero(const RunResult& result, const ProblemInstance& prob,
                           const GraphTriple& triple, double gamma, double tol) {
  // One extra traced sweep at the converged state yields the resolvent
  // arguments, from which selections follow by inverting the resolvents.
  SolverState s;
  s.w = result.w_star;
  s.x = result.x_final;
  StepAudit audit;
  step(s, prob, triple, gamma, /*theta_k=*/1.0, &audit);
  const int n = prob.order();
  Eigen::MatrixXd candidates(prob.dim, n);
  for (int i = 1; i <= n; ++i) {
    const double di = triple.degree(i);
    candidates.col(i - 1) =
        (audit.resolvent_args.col(i - 1) - audit.resolvent_outs.col(i - 1)) * (di / gamma);
  }
  return check_zero(result.x_star, candidates, prob, gamma, tol);
}

MonotonicityReport monotonicity_sample(const ProductOperatorBundle& bundle, int trials,
                                       Rng& rng) {
  const int n = bundle.order();
  const int d = bundle.prob.dim;
  MonotonicityReport rep;
  rep.trials = trials;
  rep.min_slack = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const Eigen::MatrixXd xs = uniform_matrix(rng, d, n, -2.0, 2.0);
    const Eigen::MatrixXd xs2 = uniform_matrix(rng, d, n, -2.0, 2.0);
    const Eigen::MatrixXd diff = bundle.apply_forward_block(xs) - bundle.apply_forward_block(xs2);
    const double slack = (diff.array() * (xs - xs2).array()).sum();
    rep.min_slack = std::min(rep.min_slack, slack);
  }
  rep.pass = rep.min_slack >= -1e-9;
  return rep;
}

WitnessReport non_cocoercivity_witness(const Vec& x) {
  const int d = static_cast<int>(x.size());
  auto id_fwd = std::make_shared<QuadraticGradient>(Eigen::MatrixXd::Identity(d, d), 1.0);
  ProblemInstance prob = ProblemInstance::make(
      d, {std::make_shared<ZeroOperator>(), std::make_shared<ZeroOperator>()}, {id_fwd});
  const GraphTriple triple = preset_triple(PresetKind::davis_yin, 2);
  const ProductOperatorBundle bundle = build_bundle(prob, triple, 2.0 * prob.beta);  // tau = 4

  Eigen::MatrixXd xs = Eigen::MatrixXd::Zero(d, 2);
  Eigen::MatrixXd xs2 = Eigen::MatrixXd::Zero(d, 2);
  xs.col(0) = x;
  xs2.col(1) = x;
  const Eigen::MatrixXd diff = bundle.apply_forward_block(xs) - bundle.apply_forward_block(xs2);
  const Eigen::MatrixXd dx = xs - xs2;
  // Per-column dots so the two equal-magnitude contributions cancel exactly.
  const Vec d1 = diff.col(0), d2 = diff.col(1);
  const Vec e1 = dx.col(0), e2 = dx.col(1);
  WitnessReport rep;
  rep.inner_product = d1.dot(e1) + d2.dot(e2);
  rep.squared_norm = d1.squaredNorm() + d2.squaredNorm();
  rep.expected_squared_norm = 2.0 * x.squaredNorm();
  return rep;
}

}  // namespace gfb
