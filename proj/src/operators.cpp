#include "mprk/operators.hpp"

#include <atomic>
#include <cmath>
#include <numbers>

namespace mprk {

namespace {
std::atomic<long long> g_f32_applies{0};
std::atomic<long long> g_f64_applies{0};
}  // namespace

namespace detail {
void count_kron_apply(bool f32) {
  (f32 ? g_f32_applies : g_f64_applies).fetch_add(1, std::memory_order_relaxed);
}
}  // namespace detail

long long kron_apply_count(Precision p) {
  return (p == Precision::F32 ? g_f32_applies : g_f64_applies).load(std::memory_order_relaxed);
}

void reset_kron_apply_counts() {
  g_f32_applies.store(0, std::memory_order_relaxed);
  g_f64_applies.store(0, std::memory_order_relaxed);
}

ProblemSpec make_problem(Equation eq, int n) {
  if (n < (eq == Equation::Heat ? 2 : 3))
    throw DimensionTooSmall("make_problem: grid too small for the requested equation");
  ProblemSpec p;
  p.equation = eq;
  p.n = n;
  const std::size_t nn = static_cast<std::size_t>(n) * n * n;

  if (eq == Equation::Heat) {
    p.h = 1.0 / (n - 1);
    p.k_op = {n, Stencil1D::DirichletLaplace1D, 0.0, -1.0 / (p.h * p.h)};
    p.initial_state.assign(nn, 0.0);
    p.forcing.resize(nn);
    p.precond_kind = ScalarKind::Real;
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          const double s = std::sin(std::numbers::pi * i * p.h) *
                           std::sin(std::numbers::pi * j * p.h) *
                           std::sin(std::numbers::pi * k * p.h);
          p.forcing[i + static_cast<std::size_t>(j) * n + static_cast<std::size_t>(k) * n * n] = s;
        }
  } else {
    p.h = 1.0 / n;
    p.k_op = {n, Stencil1D::PeriodicCentralDiff1D, 0.0, -1.0 / (2.0 * p.h)};
    p.initial_state.resize(nn);
    p.precond_kind = ScalarKind::Complex;
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          const double dx = i * p.h - 0.5, dy = j * p.h - 0.5, dz = k * p.h - 0.5;
          p.initial_state[i + static_cast<std::size_t>(j) * n + static_cast<std::size_t>(k) * n * n] =
              std::exp(-100.0 * (dx * dx + dy * dy + dz * dz));
        }
  }
  return p;
}

std::vector<double> heat_exact(const ProblemSpec& p, double t) {
  if (p.equation != Equation::Heat)
    throw WrongEquation("heat_exact: analytic solution exists for the heat problem only");
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double amp = (1.0 - std::exp(-3.0 * pi2 * t)) / (3.0 * pi2);
  std::vector<double> u(p.forcing.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = amp * p.forcing[i];
  return u;
}

KronSumOperator stage_operator(const ProblemSpec& p, double tau, double a) {
  return {p.n, p.k_op.stencil, 1.0, -tau * a * p.k_op.gamma};
}

std::vector<double> apply_f(const ProblemSpec& p, const std::vector<double>& u, Precision prec) {
  if (prec == Precision::F64) {
    std::vector<double> out;
    p.k_op.apply(u, out);
    for (std::size_t i = 0; i < p.forcing.size(); ++i) out[i] += p.forcing[i];
    return out;
  }
  const std::vector<float> u32 = downcast(u);
  std::vector<float> out32;
  p.k_op.apply(u32, out32);
  if (!p.forcing.empty()) {
    const std::vector<float> g32 = downcast(p.forcing);
    for (std::size_t i = 0; i < out32.size(); ++i) out32[i] += g32[i];
  }
  return upcast(out32);
}

PrecVector apply(const KronSumOperator& op, const PrecVector& x, Precision out_precision) {
  if (x.kind() == ScalarKind::Complex) {
    if (out_precision == Precision::F32) {
      const auto& v = x.precision() == Precision::F32
                          ? x.as<std::complex<float>>()
                          : downcast(x.as<std::complex<double>>());
      std::vector<std::complex<float>> out;
      op.apply(v, out);
      return PrecVector(upcast(out));
    }
    const auto& v = x.precision() == Precision::F64 ? x.as<std::complex<double>>()
                                                    : upcast(x.as<std::complex<float>>());
    std::vector<std::complex<double>> out;
    op.apply(v, out);
    return PrecVector(std::move(out));
  }
  if (out_precision == Precision::F32) {
    const auto& v = x.precision() == Precision::F32 ? x.as<float>() : downcast(x.as<double>());
    std::vector<float> out;
    op.apply(v, out);
    return PrecVector(upcast(out));
  }
  const auto& v = x.precision() == Precision::F64 ? x.as<double>() : upcast(x.as<float>());
  std::vector<double> out;
  op.apply(v, out);
  return PrecVector(std::move(out));
}

double perturbation_norm(const ProblemSpec& p, const std::vector<double>& u) {
  const std::vector<double> hi = apply_f(p, u, Precision::F64);
  const std::vector<double> lo = apply_f(p, u, Precision::F32);
  double worst = 0.0;
  for (std::size_t i = 0; i < hi.size(); ++i) worst = std::max(worst, std::abs(hi[i] - lo[i]));
  return worst / std::ldexp(1.0, -24);
}

}  // namespace mprk
