#pragma once

#include <Eigen/Core>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gfb/errors.hpp"

namespace gfb {

using Vec = Eigen::VectorXd;

// Maximally monotone operator evaluated through its resolvent
// J_{sigma A} = (Id + sigma A)^{-1}. Implementations are immutable and
// reentrant; resolve() is single-valued with full domain.
class ResolventOperator {
 public:
  virtual ~ResolventOperator() = default;
  virtual Vec resolve(double sigma, const Vec& v) const = 0;
  virtual std::string kind() const = 0;
};

// Cocoercive operator evaluated forward.
class ForwardOperator {
 public:
  virtual ~ForwardOperator() = default;
  virtual Vec apply(const Vec& x) const = 0;
  // Tight cocoercivity constant; +inf for the zero operator (never binding).
  virtual double beta() const = 0;
  virtual std::string kind() const = 0;
  virtual bool is_zero() const { return false; }
};

// A = 0; the resolvent is the identity.
class ZeroOperator final : public ResolventOperator {
 public:
  Vec resolve(double, const Vec& v) const override { return v; }
  std::string kind() const override { return "zero"; }
};

// Projection onto the closed ball of given center and radius.
Vec ball_projection(const Vec& center, double radius, const Vec& x);

// Normal cone of a closed ball; the resolvent is the projection.
class BallNormalCone final : public ResolventOperator {
 public:
  BallNormalCone(Vec center, double radius);
  Vec resolve(double, const Vec& v) const override;
  std::string kind() const override { return "ball"; }
  const Vec& center() const { return center_; }
  double radius() const { return radius_; }

 private:
  Vec center_;
  double radius_;
};

// Normal cone of a box [lo, hi]; the resolvent is the componentwise clamp.
class BoxNormalCone final : public ResolventOperator {
 public:
  BoxNormalCone(Vec lo, Vec hi);
  Vec resolve(double, const Vec& v) const override;
  std::string kind() const override { return "box"; }
  const Vec& lo() const { return lo_; }
  const Vec& hi() const { return hi_; }

 private:
  Vec lo_, hi_;
};

// A(x) = Mx for a monotone matrix M (positive semidefinite symmetric part).
// The resolvent solves (I + sigma M) x = v.
class LinearMonotone final : public ResolventOperator {
 public:
  explicit LinearMonotone(Eigen::MatrixXd m);
  Vec resolve(double sigma, const Vec& v) const override;
  std::string kind() const override { return "linear"; }
  const Eigen::MatrixXd& matrix() const { return m_; }

 private:
  Eigen::MatrixXd m_;
};

// B = 0 with no binding cocoercivity constant.
class ZeroForward final : public ForwardOperator {
 public:
  Vec apply(const Vec& x) const override { return Vec::Zero(x.size()); }
  double beta() const override { return std::numeric_limits<double>::infinity(); }
  std::string kind() const override { return "zero"; }
  bool is_zero() const override { return true; }
};

// B(x) = Qx for symmetric positive semidefinite Q; 1/||Q||_2-cocoercive.
class QuadraticGradient final : public ForwardOperator {
 public:
  // Estimates beta = 1 / lambda_max(Q) by power iteration unless given.
  explicit QuadraticGradient(Eigen::MatrixXd q, std::optional<double> beta = std::nullopt);
  Vec apply(const Vec& x) const override;
  double beta() const override { return beta_; }
  std::string kind() const override { return "quadratic"; }
  const Eigen::MatrixXd& matrix() const { return q_; }

 private:
  Eigen::MatrixXd q_;
  double beta_;
};

// 1 / lambda_max(Q) by power iteration (relative tolerance 1e-8, at most 1e4
// iterations). Throws ZeroMatrix when lambda_max < 1e-14.
double estimate_cocoercivity(const Eigen::MatrixXd& q);

// x = J_{sigma A}(v) together with the selection a = (v - x)/sigma in A(x).
std::pair<Vec, Vec> residual_element(const ResolventOperator& op, double sigma, const Vec& v);

// Problem data: n resolvent-capable operators A_1..A_n, n-1 forward operators
// B_1..B_{n-1} and a common cocoercivity constant beta.
struct ProblemInstance {
  int dim = 0;
  std::vector<std::shared_ptr<const ResolventOperator>> resolvents;
  std::vector<std::shared_ptr<const ForwardOperator>> forwards;
  double beta = 0.0;

  int order() const { return static_cast<int>(resolvents.size()); }

  // Validates sizes and the constant: beta defaults to the minimum of the
  // forwards' tight constants; when every forward is zero, the sentinel is
  // used so that stepsize bounds are effectively unconstrained. A caller may
  // pass a smaller beta, never a larger one.
  static ProblemInstance make(int dim,
                              std::vector<std::shared_ptr<const ResolventOperator>> resolvents,
                              std::vector<std::shared_ptr<const ForwardOperator>> forwards,
                              std::optional<double> beta = std::nullopt,
                              double zero_beta_sentinel = 1e8);
};

}  // namespace gfb
