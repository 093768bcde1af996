#include "mprk/stepper.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>

#include "mprk/precond.hpp"

namespace mprk {

namespace {

void axpy(std::vector<double>& y, double alpha, const std::vector<double>& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

void check_finite(const std::vector<double>& v, const char* what) {
  for (const double x : v)
    if (!std::isfinite(x)) throw NonFiniteState(std::string(what) + " picked up a NaN or infinity");
}

std::vector<std::complex<double>> promote(const std::vector<double>& v) {
  std::vector<std::complex<double>> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
  return out;
}

std::vector<double> real_part(const std::vector<std::complex<double>>& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].real();
  return out;
}

}  // namespace

struct Stepper::Impl {
  ProblemSpec problem;
  IntegrationConfig cfg;

  struct StageSolver {
    double a = 0.0;
    KronSumOperator op;
    std::optional<FastDiagPreconditioner<double>> p_r64;
    std::optional<FastDiagPreconditioner<float>> p_r32;
    std::optional<FastDiagPreconditioner<std::complex<double>>> p_c64;
    std::optional<FastDiagPreconditioner<std::complex<float>>> p_c32;
  };
  std::vector<StageSolver> solvers;
  std::vector<int> solver_of_stage;  // -1 for explicit stages
  std::vector<char> need_f64, need_feps;

  Impl(const ProblemSpec& p, const IntegrationConfig& c) : problem(p), cfg(c) {
    const ButcherTableau& t = cfg.tableau;
    const int q = t.q;
    solver_of_stage.assign(q, -1);
    need_f64.assign(q, 0);
    need_feps.assign(q, 0);

    for (int j = 0; j < q; ++j) {
      if (t.b[j] != 0.0) need_f64[j] = 1;
      for (int i = j + 1; i < q; ++i) {
        if (t.a_high[i][j] != 0.0) need_f64[j] = 1;
        if (t.a_eps[i][j] != 0.0) need_feps[j] = 1;
      }
    }

    for (int i = 0; i < q; ++i) {
      const double a = t.a_eps[i][i];
      if (a == 0.0) continue;
      int idx = -1;
      for (std::size_t s = 0; s < solvers.size(); ++s)
        if (solvers[s].a == a) idx = static_cast<int>(s);
      if (idx < 0) {
        StageSolver s;
        s.a = a;
        s.op = stage_operator(problem, cfg.tau, a);
        const bool f32 = cfg.policy.implicit == Precision::F32;
        if (problem.equation == Equation::Heat) {
          if (f32)
            s.p_r32 = build_heat_precond_f32(problem, cfg.tau, a);
          else
            s.p_r64 = build_heat_precond(problem, cfg.tau, a);
        } else {
          if (f32)
            s.p_c32 = build_advection_precond_f32(problem, cfg.tau, a);
          else
            s.p_c64 = build_advection_precond(problem, cfg.tau, a);
        }
        solvers.push_back(std::move(s));
        idx = static_cast<int>(solvers.size()) - 1;
      }
      solver_of_stage[i] = idx;
    }
  }

  std::vector<double> solve_stage(int solver_idx, const std::vector<double>& rhs, SolveReport& rep) {
    StageSolver& s = solvers[solver_idx];
    const StoppingCriterion crit{cfg.tol, cfg.max_iter};

    if (problem.equation == Equation::Heat) {
      if (cfg.policy.implicit == Precision::F64) {
        ApplyFn<double> op = [&](const std::vector<double>& x, std::vector<double>& out) {
          ScopedTimer st(&rep.timings, "stencil");
          s.op.apply(x, out);
        };
        ApplyFn<double> pre = [&](const std::vector<double>& x, std::vector<double>& out) {
          s.p_r64->apply_inverse(x, out, &rep.timings);
        };
        return cg<double>(op, pre, rhs, rhs, crit, rep);
      }
      const std::vector<float> b32 = downcast(rhs);
      ApplyFn<float> op = [&](const std::vector<float>& x, std::vector<float>& out) {
        ScopedTimer st(&rep.timings, "stencil");
        s.op.apply(x, out);
      };
      ApplyFn<float> pre = [&](const std::vector<float>& x, std::vector<float>& out) {
        s.p_r32->apply_inverse(x, out, &rep.timings);
      };
      return upcast(cg<float>(op, pre, b32, b32, crit, rep));
    }

    if (cfg.policy.implicit == Precision::F64) {
      const std::vector<std::complex<double>> bc = promote(rhs);
      ApplyFn<std::complex<double>> op = [&](const std::vector<std::complex<double>>& x,
                                             std::vector<std::complex<double>>& out) {
        ScopedTimer st(&rep.timings, "stencil");
        s.op.apply(x, out);
      };
      ApplyFn<std::complex<double>> pre = [&](const std::vector<std::complex<double>>& x,
                                              std::vector<std::complex<double>>& out) {
        s.p_c64->apply_inverse(x, out, &rep.timings);
      };
      return real_part(gmres<std::complex<double>>(op, pre, bc, bc, crit, rep));
    }
    const std::vector<std::complex<float>> bc = downcast(promote(rhs));
    ApplyFn<std::complex<float>> op = [&](const std::vector<std::complex<float>>& x,
                                          std::vector<std::complex<float>>& out) {
      ScopedTimer st(&rep.timings, "stencil");
      s.op.apply(x, out);
    };
    ApplyFn<std::complex<float>> pre = [&](const std::vector<std::complex<float>>& x,
                                           std::vector<std::complex<float>>& out) {
      s.p_c32->apply_inverse(x, out, &rep.timings);
    };
    return real_part(upcast(gmres<std::complex<float>>(op, pre, bc, bc, crit, rep)));
  }

  void step(std::vector<double>& u, StepTrace& trace) {
    const ButcherTableau& t = cfg.tableau;
    const int q = t.q;
    const double tau = cfg.tau;
    const bool f32_policy = cfg.policy.implicit == Precision::F32;

    std::vector<std::vector<double>> y(q), f_hi(q), f_eps(q);

    for (int i = 0; i < q; ++i) {
      std::vector<double> rhs = u;
      {
        ScopedTimer ax(&trace.timings, "axpy");
        for (int j = 0; j < i; ++j) {
          if (t.a_high[i][j] != 0.0) axpy(rhs, tau * t.a_high[i][j], f_hi[j]);
          if (t.a_eps[i][j] != 0.0) axpy(rhs, tau * t.a_eps[i][j], f_eps[j]);
        }
      }

      const double a = t.a_eps[i][i];
      if (a != 0.0) {
        if (!problem.forcing.empty()) {
          ScopedTimer ax(&trace.timings, "axpy");
          axpy(rhs, tau * a, problem.forcing);
        }
        SolveReport rep;
        y[i] = solve_stage(solver_of_stage[i], rhs, rep);
        if (!rep.converged) trace.solver_failure = true;
        trace.timings.merge(rep.timings);
        trace.solves.push_back(std::move(rep));
      } else {
        y[i] = std::move(rhs);
      }
      check_finite(y[i], "stage vector");

      if (need_f64[i]) {
        ScopedTimer st(&trace.timings, "stencil");
        f_hi[i] = apply_f(problem, y[i], Precision::F64);
      }
      if (need_feps[i]) {
        if (f32_policy) {
          ScopedTimer st(&trace.timings, "stencil");
          f_eps[i] = apply_f(problem, y[i], Precision::F32);
        } else if (need_f64[i]) {
          f_eps[i] = f_hi[i];
        } else {
          ScopedTimer st(&trace.timings, "stencil");
          f_eps[i] = apply_f(problem, y[i], Precision::F64);
        }
      }
    }

    {
      ScopedTimer ax(&trace.timings, "axpy");
      for (int i = 0; i < q; ++i)
        if (t.b[i] != 0.0) axpy(u, tau * t.b[i], f_hi[i]);
    }
    check_finite(u, "updated state");
  }
};

Stepper::Stepper(const ProblemSpec& problem, const IntegrationConfig& cfg)
    : impl_(std::make_unique<Impl>(problem, cfg)) {}

Stepper::~Stepper() = default;

void Stepper::step(std::vector<double>& u, StepTrace& trace) { impl_->step(u, trace); }

const ProblemSpec& Stepper::problem() const { return impl_->problem; }

IntegrationResult integrate(const ProblemSpec& problem, const IntegrationConfig& cfg,
                            const std::vector<double>* reference) {
  if (!(cfg.tau > 0.0)) throw Error("integrate: tau must be positive");
  const double ratio = cfg.t_end / cfg.tau;
  const long long steps = std::llround(ratio);
  if (steps < 1 || std::abs(steps * cfg.tau - cfg.t_end) > 1e-9 * std::max(1.0, std::abs(cfg.t_end)))
    throw Error("integrate: tau must divide t_end");

  const auto wall_start = std::chrono::steady_clock::now();
  IntegrationResult res;
  res.steps = static_cast<int>(steps);
  res.state = problem.initial_state;

  Stepper stepper(problem, cfg);
  for (long long s = 0; s < steps; ++s) {
    StepTrace trace;
    stepper.step(res.state, trace);
    res.solver_failure = res.solver_failure || trace.solver_failure;
    res.timings.merge(trace.timings);
    for (const SolveReport& rep : trace.solves) {
      res.solve_iterations.push_back(rep.iterations);
      res.total_iterations += rep.iterations;
    }
  }
  res.mean_iterations = res.solve_iterations.empty()
                            ? 0.0
                            : static_cast<double>(res.total_iterations) /
                                  static_cast<double>(res.solve_iterations.size());

  const std::vector<double>* target = reference;
  std::vector<double> exact;
  if (target == nullptr && problem.equation == Equation::Heat) {
    exact = heat_exact(problem, cfg.t_end);
    target = &exact;
  }
  if (target != nullptr) {
    if (target->size() != res.state.size())
      throw LengthMismatch("integrate: reference state has the wrong length");
    double worst = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < res.state.size(); ++i) {
      const double e = res.state[i] - (*target)[i];
      worst = std::max(worst, std::abs(e));
      sq += e * e;
    }
    res.error_max = worst;
    res.error_l2 = std::sqrt(sq / static_cast<double>(res.state.size()));
  }

  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return res;
}

TemporalOrderResult temporal_order(const ProblemSpec& problem, IntegrationConfig cfg,
                                   std::vector<double> tau_list) {
  if (tau_list.empty()) throw Error("temporal_order: tau list must not be empty");
  double tau_min = tau_list.front();
  for (const double t : tau_list) tau_min = std::min(tau_min, t);

  IntegrationConfig ref_cfg = cfg;
  ref_cfg.tau = tau_min / 16.0;
  ref_cfg.tol = 1e-12;
  ref_cfg.policy.implicit = Precision::F64;
  const IntegrationResult ref = integrate(problem, ref_cfg);

  TemporalOrderResult out;
  out.solver_failure = ref.solver_failure;
  out.taus = std::move(tau_list);
  for (const double tau : out.taus) {
    cfg.tau = tau;
    const IntegrationResult r = integrate(problem, cfg, &ref.state);
    out.errors_max.push_back(*r.error_max);
    out.errors_l2.push_back(*r.error_l2);
    out.solver_failure = out.solver_failure || r.solver_failure;
  }

  // Least-squares slope of log(error) against log(tau).  The RMS error is
  // the fitted quantity; the max norm concentrates on the outermost nodes,
  // whose boundary-dominated error converges on its own schedule.
  const std::size_t m = out.taus.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = std::log(out.taus[i]);
    const double y = std::log(out.errors_l2[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = m * sxx - sx * sx;
  out.slope = denom != 0.0 ? (m * sxy - sx * sy) / denom : 0.0;
  return out;
}

}  // namespace mprk
