#pragma once

#include <Eigen/Core>

#include "gfb/graph.hpp"
#include "gfb/operators.hpp"

namespace gfb {
struct SolverState;
}

// Hand-coded iterations of the display equations the presets reduce to. These
// are written directly from the printed formulas, independent of the engine's
// sweep, and exist solely to cross-check it.
namespace gfb::reference {

struct State {
  Eigen::MatrixXd w;   // scheme-local governing variables, d x (n-1)
  Eigen::MatrixXd x;   // resolvent variables from the last advance, d x n
  double gamma = 0.0;  // scheme-local stepsize
  double theta = 0.0;  // scheme-local relaxation
  double w_scale = 1.0;  // engine w  =  w_scale * scheme w
  int p3 = 0;            // four-operator schemes: node evaluated by B
};

// Prepares the scheme-local state for the given engine parameters. The ring
// scheme runs at (gamma/2, theta/2, w0/2) and the limit-case scheme at
// (gamma/(n-1), theta/(n-1), w0/(n-1)); all others use the parameters as-is.
State make_state(PresetKind kind, const ProblemInstance& prob, const Eigen::MatrixXd& w0,
                 double gamma, double theta);

void advance(PresetKind kind, const ProblemInstance& prob, State& s);

// Max componentwise deviation between the engine state and the scheme state
// (x directly, w through w_scale).
double deviation(PresetKind kind, const SolverState& engine, const State& s);

// One iteration of the graph splitting scheme without forward operators (the
// B = 0 reduction). Returns the resolvent variables and updates w in place.
Eigen::MatrixXd graph_drs_step(
    const std::vector<std::shared_ptr<const ResolventOperator>>& resolvents,
    const GraphTriple& triple, Eigen::MatrixXd& w, double gamma, double theta);

}  // namespace gfb::reference
