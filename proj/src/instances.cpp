#include "gfb/instances.hpp"

namespace gfb {

Eigen::MatrixXd uniform_matrix(Rng& rng, int rows, int cols, double a, double b) {
  Eigen::MatrixXd m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = rng.uniform(a, b);
  return m;
}

Eigen::MatrixXd random_psd(Rng& rng, int d, double scale) {
  const Eigen::MatrixXd w = uniform_matrix(rng, d, d, -scale / 2, scale / 2);
  return 0.5 * (w.transpose() * w);
}

namespace {

std::shared_ptr<const ResolventOperator> random_resolvent(Rng& rng, int dim,
                                                          const InstanceOptions& opts) {
  for (;;) {
    switch (rng.next_u64() % 4) {
      case 0:
        return std::make_shared<BallNormalCone>(uniform_vector(rng, dim, -1.0, 1.0),
                                                rng.uniform(0.5, 2.0));
      case 1: {
        if (!opts.allow_box) continue;
        Vec lo = uniform_vector(rng, dim, -2.0, 0.0);
        Vec hi = lo + uniform_vector(rng, dim, 0.5, 2.0);
        return std::make_shared<BoxNormalCone>(std::move(lo), std::move(hi));
      }
      case 2:
        if (!opts.allow_linear) continue;
        return std::make_shared<LinearMonotone>(random_psd(rng, dim));
      default:
        return std::make_shared<ZeroOperator>();
    }
  }
}

}  // namespace

ProblemInstance make_random_instance(Rng& rng, int n, int dim, const InstanceOptions& opts) {
  std::vector<std::shared_ptr<const ResolventOperator>> as;
  as.reserve(n);
  for (int i = 0; i < n; ++i) as.push_back(random_resolvent(rng, dim, opts));

  std::vector<std::shared_ptr<const ForwardOperator>> bs;
  bs.reserve(n - 1);
  for (int j = 1; j <= n - 1; ++j) {
    const bool zero = opts.all_zero_forwards || (opts.zero_forward_head && j == 1) ||
                      (opts.single_tail_forward && j != n - 1);
    if (zero)
      bs.push_back(std::make_shared<ZeroForward>());
    else
      bs.push_back(std::make_shared<QuadraticGradient>(random_psd(rng, dim)));
  }
  return ProblemInstance::make(dim, std::move(as), std::move(bs));
}

}  // namespace gfb
