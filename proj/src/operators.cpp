#include "gfb/operators.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "gfb/rng.hpp"

namespace gfb {

Vec ball_projection(const Vec& center, double radius, const Vec& x) {
  if (x.size() != center.size()) throw DimensionMismatch("ball projection: dimension mismatch");
  const Vec diff = x - center;
  const double nrm = diff.norm();
  if (nrm <= radius) return x;
  return center + (radius / nrm) * diff;
}

BallNormalCone::BallNormalCone(Vec center, double radius)
    : center_(std::move(center)), radius_(radius) {
  if (!(radius_ > 0)) throw Error("ball radius must be positive");
}

Vec BallNormalCone::resolve(double, const Vec& v) const {
  return ball_projection(center_, radius_, v);
}

BoxNormalCone::BoxNormalCone(Vec lo, Vec hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.size() != hi_.size()) throw DimensionMismatch("box bounds size mismatch");
  if ((lo_.array() > hi_.array()).any()) throw Error("box bounds must satisfy lo <= hi");
}

Vec BoxNormalCone::resolve(double, const Vec& v) const {
  if (v.size() != lo_.size()) throw DimensionMismatch("box resolvent: dimension mismatch");
  return v.cwiseMax(lo_).cwiseMin(hi_);
}

LinearMonotone::LinearMonotone(Eigen::MatrixXd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw Error("linear operator matrix must be square");
  const Eigen::MatrixXd sym = 0.5 * (m_ + m_.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < -1e-10 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff()))
    throw Error("linear operator is not monotone (symmetric part has a negative eigenvalue)");
}

Vec LinearMonotone::resolve(double sigma, const Vec& v) const {
  if (v.size() != m_.rows()) throw DimensionMismatch("linear resolvent: dimension mismatch");
  const Eigen::MatrixXd sys =
      Eigen::MatrixXd::Identity(m_.rows(), m_.cols()) + sigma * m_;
  return sys.partialPivLu().solve(v);
}

QuadraticGradient::QuadraticGradient(Eigen::MatrixXd q, std::optional<double> beta)
    : q_(std::move(q)) {
  if (q_.rows() != q_.cols()) throw Error("quadratic gradient matrix must be square");
  beta_ = beta ? *beta : estimate_cocoercivity(q_);
  if (!(beta_ > 0)) throw Error("cocoercivity constant must be positive");
}

Vec QuadraticGradient::apply(const Vec& x) const {
  if (x.size() != q_.rows()) throw DimensionMismatch("quadratic gradient: dimension mismatch");
  return q_ * x;
}

double estimate_cocoercivity(const Eigen::MatrixXd& q) {
  const int d = static_cast<int>(q.rows());
  Rng rng(0x5eedULL);
  Vec v = random_unit_vector(rng, d);
  double lambda = 0.0;
  constexpr int kMaxIters = 10000;
  constexpr double kRelTol = 1e-8;
  for (int it = 0; it < kMaxIters; ++it) {
    Vec qv = q * v;
    const double nrm = qv.norm();
    if (nrm < 1e-14) throw ZeroMatrix("matrix is numerically zero; treat the operator as zero");
    v = qv / nrm;
    const double next = v.dot(q * v);
    if (it > 0 && std::abs(next - lambda) <= kRelTol * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  if (lambda < 1e-14) throw ZeroMatrix("dominant eigenvalue below 1e-14");
  return 1.0 / lambda;
}

std::pair<Vec, Vec> residual_element(const ResolventOperator& op, double sigma, const Vec& v) {
  if (!(sigma > 0)) throw Error("residual_element needs sigma > 0");
  Vec x = op.resolve(sigma, v);
  Vec a = (v - x) / sigma;
  return {std::move(x), std::move(a)};
}

ProblemInstance ProblemInstance::make(
    int dim, std::vector<std::shared_ptr<const ResolventOperator>> resolvents,
    std::vector<std::shared_ptr<const ForwardOperator>> forwards, std::optional<double> beta,
    double zero_beta_sentinel) {
  const int n = static_cast<int>(resolvents.size());
  if (n < 2) throw Error("a problem needs at least two monotone operators");
  if (static_cast<int>(forwards.size()) != n - 1)
    throw DimensionMismatch("expected n-1 = " + std::to_string(n - 1) + " forward operators, got " +
                            std::to_string(forwards.size()));
  if (dim < 1) throw Error("ambient dimension must be positive");

  double tight = std::numeric_limits<double>::infinity();
  for (const auto& f : forwards) tight = std::min(tight, f->beta());
  if (std::isinf(tight)) tight = zero_beta_sentinel;

  ProblemInstance prob;
  prob.dim = dim;
  prob.resolvents = std::move(resolvents);
  prob.forwards = std::move(forwards);
  prob.beta = beta ? *beta : tight;
  if (!(prob.beta > 0)) throw Error("beta must be positive");
  if (prob.beta > tight * (1 + 1e-12))
    throw Error("beta exceeds the tight cocoercivity constant of the forwards");
  return prob;
}

}  // namespace gfb
