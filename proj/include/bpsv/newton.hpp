#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bpsv/energy.hpp"

namespace bpsv {

struct SolverSettings {
  double tol_grad_sup = 1e-9;
  int max_iters = 100;
  double armijo_c = 1e-4;
  double backtrack_factor = 0.5;
  double cg_tol = 1e-10;
  int cg_max_iters = 400;

  void validate() const;
};

struct Solution {
  StatePair state;
  int iterations = 0;
  int cg_iterations = 0;
  std::vector<double> grad_history;    // sup-norm gradient per iterate
  std::vector<double> energy_history;  // energy per iterate
  bool converged = false;
  std::string message;                 // failure diagnostic when !converged
};

// Damped Newton on a strictly convex functional: CG on the Hessian with the
// spectral preconditioner, Armijo backtracking on the energy.
Solution minimize(const Functional& fn, StatePair init, const SolverSettings& settings);

// Everything a solve needs for one configuration.
struct Problem {
  Variant variant;
  AnyGrid grid;
  VortexConfig cfg;
  PhysicalParams params;
};

struct Assembled {
  Background background;
  std::shared_ptr<Discretization> disc;
  std::unique_ptr<Functional> functional;
};

// Builds background, discretization and functional. Torus problems are not
// gated here; see solve.
Assembled assemble(const Problem& pb);

// Throws ThresholdViolated (torus, before any iteration) when no solution
// exists. Non-convergence is reported in the Solution, not thrown.
Solution solve(const Problem& pb, const SolverSettings& settings,
               std::optional<StatePair> init = std::nullopt);

struct ContinuationResult {
  Solution solution;
  std::vector<int> stage_iterations;
};

// Adds phi zeros one at a time, warm-starting each stage from the previous
// one.
ContinuationResult continuation_in_vortices(const Problem& pb, const SolverSettings& settings);

// Smooth random state: a few low Fourier (torus) or sine (plane) modes with
// amplitudes uniform in [-amplitude, amplitude].
StatePair random_smooth_state(const Problem& pb, unsigned long long seed, double amplitude = 1.0);

}  // namespace bpsv
