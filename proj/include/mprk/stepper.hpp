#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mprk/krylov.hpp"
#include "mprk/operators.hpp"
#include "mprk/precision.hpp"
#include "mprk/tableau.hpp"
#include "mprk/timing.hpp"

namespace mprk {

/// Which arithmetic the implicit machinery runs in: every diagonal
/// (A_eps) stage solve and every low-precision right-hand-side evaluation
/// f_eps follows this choice.  Stage combinations, the final update and
/// all state vectors are binary64 regardless.
struct PrecisionPolicy {
  Precision implicit = Precision::F64;
};

/// Time-integration request: tau must divide t_end to within one part in
/// 1e-9.  tol drives the per-stage Krylov stopping rule.
struct IntegrationConfig {
  ButcherTableau tableau;
  double tau = 0.0;
  double t_end = 0.1;
  double tol = 1e-6;
  PrecisionPolicy policy;
  int max_iter = 40;
};

/// Per-step record of the implicit solves and timed kernels.
struct StepTrace {
  std::vector<SolveReport> solves;  ///< one per implicit stage, in stage order
  TimingRegistry timings;           ///< labels from {tensor-*, diag, precond, solver, stencil, axpy}
  bool solver_failure = false;      ///< some solve did not converge
};

/// One step of the split-tableau scheme from state u at time t:
///   stage i: rhs = u + tau * sum_{j<i} (A_high[i][j] f(y_j) + A_eps[i][j] f_eps(y_j))
///            y_i = rhs                                   if A_eps[i][i] == 0
///            (I - tau A_eps[i][i] K) y_i = rhs + tau A_eps[i][i] g  otherwise,
///            solved by CG (heat) or GMRES (advection, promoted to complex)
///            in the policy precision with the fast-diagonalization
///            preconditioner and the narrowed rhs as the initial guess;
///   update:  u <- u + tau * sum_i b_i f(y_i) in binary64.
/// Solver failures surface in the trace; the step still completes with the
/// returned iterates.  Throws NonFiniteState if a stage or the new state
/// picks up a NaN or infinity.
class Stepper {
 public:
  Stepper(const ProblemSpec& problem, const IntegrationConfig& cfg);
  ~Stepper();

  void step(std::vector<double>& u, StepTrace& trace);

  const ProblemSpec& problem() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Aggregate of a full integration run.
struct IntegrationResult {
  std::vector<double> state;
  std::optional<double> error_max;      ///< vs analytic solution (heat) or reference
  std::optional<double> error_l2;       ///< root-mean-square companion of error_max
  double mean_iterations = 0.0;
  long long total_iterations = 0;
  std::vector<int> solve_iterations;    ///< per implicit solve, run order
  bool solver_failure = false;
  TimingRegistry timings;
  double wall_seconds = 0.0;
  int steps = 0;
};

/// March from the problem's initial state to t_end.  For heat the errors
/// compare against the sampled analytic solution; otherwise against
/// `reference` when supplied.
IntegrationResult integrate(const ProblemSpec& problem, const IntegrationConfig& cfg,
                            const std::vector<double>* reference = nullptr);

/// Least-squares slope of log(final-time RMS error) against log(tau) over
/// tau_list, errors measured against a same-grid reference trajectory
/// computed with tau_ref = min(tau_list)/16 in F64 at tol 1e-12.
struct TemporalOrderResult {
  double slope = 0.0;
  std::vector<double> taus;
  std::vector<double> errors_max;
  std::vector<double> errors_l2;
  bool solver_failure = false;  ///< some run in the sweep had a failed solve
};

TemporalOrderResult temporal_order(const ProblemSpec& problem, IntegrationConfig cfg,
                                   std::vector<double> tau_list);

}  // namespace mprk
