#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gfb/bench.hpp"
#include "gfb/graph.hpp"
#include "gfb/operators.hpp"

namespace gfb {

// Problem files are JSON with one record per operator; vectors and matrices
// are stored inline for dimensions up to 20 and as sidecar CSV files (paths
// relative to the problem file) above that.
struct LoadedProblem {
  ProblemInstance instance;
  std::vector<Vec> w0s;  // optional starting vectors recorded in the file
};

LoadedProblem load_problem(const std::filesystem::path& path);

void write_problem(const std::filesystem::path& path, const GeneratedProblem& problem);
void write_problem(const std::filesystem::path& path, const ProblemInstance& instance,
                   const std::vector<Vec>& w0s);

// Custom triple files: {"n": ..., "g_edges": [[i,j],...], "gp_edges": ...,
// "gpp_edges": ...}.
GraphTriple load_triple(const std::filesystem::path& path);
void write_triple(const std::filesystem::path& path, const GraphTriple& triple);

// Full-precision CSV helpers (one row per line, %.17g fields).
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

}  // namespace gfb
