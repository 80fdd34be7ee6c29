#pragma once

#include <Eigen/Core>

#include "gfb/operators.hpp"
#include "gfb/rng.hpp"

namespace gfb {

Eigen::MatrixXd uniform_matrix(Rng& rng, int rows, int cols, double a, double b);

// 1/2 W^T W with W uniform in [-scale/2, scale/2].
Eigen::MatrixXd random_psd(Rng& rng, int d, double scale = 1.0);

struct InstanceOptions {
  bool allow_linear = true;
  bool allow_box = true;
  bool zero_forward_head = false;    // force B_1 = 0 (four-operator shapes)
  bool single_tail_forward = false;  // all forwards zero except B_{n-1}
  bool all_zero_forwards = false;
};

// Mixed random test instance: balls, boxes, linear monotone and zero
// operators for the resolvents; quadratic gradients for the forwards.
ProblemInstance make_random_instance(Rng& rng, int n, int dim,
                                     const InstanceOptions& opts = {});

}  // namespace gfb
