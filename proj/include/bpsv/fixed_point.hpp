#pragma once

#include <vector>

#include "bpsv/newton.hpp"

namespace bpsv {

// Zero-mean smooth parts: u' and w' with v' = t v0 + w'.
struct ZeroMeanPair {
  ScalarField u_prime;
  ScalarField w_prime;
};

struct ContinuationSchedule {
  std::vector<double> t_values;  // increasing, ending at 1
  double omega = 0.5;            // initial relaxation, halved on residual increase
  double min_omega = 1e-4;
  double inner_tol = 1e-12;      // sup norm of pair - T_t(pair)
  int max_inner_iters = 2000;
  int max_refinements = 3;

  static ContinuationSchedule uniform(int steps);
  void validate() const;
};

// Context shared by all applications of T on one problem (torus, base model).
class FixedPointOperator {
 public:
  explicit FixedPointOperator(const Problem& pb);

  // T_t(pair): both right-hand sides carry the factor t, built from
  // normalized exponentials, mean-projected and Poisson-inverted.
  ZeroMeanPair apply(const ZeroMeanPair& pair, double t);

  // Max over the cell of C2 e^{u'}/int e^{u'} and C1 e^{v'}/int e^{v'}.
  struct Densities {
    double max_h = 0.0;
    double max_g = 0.0;
  };
  Densities densities(const ZeroMeanPair& pair, double t) const;

  // Full state (u, f) from the t = 1 fixed point, restoring the means.
  StatePair recover(const ZeroMeanPair& pair) const;

  double gradient_norm(const ZeroMeanPair& pair);
  const TorusGrid& grid() const { return grid_; }
  const Background& background() const { return bg_; }
  double C1() const { return C1_; }
  double C2() const { return C2_; }

 private:
  TorusGrid grid_;
  PhysicalParams params_;
  std::size_t n_ = 0;
  Background bg_;
  double C1_ = 0.0, C2_ = 0.0;
  SpectralWorkspace ws_;
};

ZeroMeanPair apply_T(const ZeroMeanPair& pair, double t, const Problem& pb);

struct StageRecord {
  double t = 0.0;
  int iterations = 0;
  double residual = 0.0;
  double max_h = 0.0;
  double max_g = 0.0;
  bool converged = false;
};

struct FixedPointResult {
  Solution solution;  // same layout as the Newton path; grad_history holds residuals
  std::vector<StageRecord> stages;
  std::vector<double> residual_history;  // accepted iterates only
  double x_norm_ceiling = 0.0;           // max gradient L2 norm over accepted iterates
  bool monotone = true;                  // residual non-increasing over accepted steps within a stage
  int refinements = 0;
};

// Torus base model only. Throws ThresholdViolated when no solution exists;
// exhaustion is reported through solution.converged.
FixedPointResult continuation_solve(const ContinuationSchedule& schedule, const Problem& pb);

}  // namespace bpsv
