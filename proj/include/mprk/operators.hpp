#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "mprk/errors.hpp"
#include "mprk/precision.hpp"
#include "mprk/spectral.hpp"

namespace mprk {

namespace detail {

template <typename T>
struct real_of {
  using type = T;
};
template <typename T>
struct real_of<std::complex<T>> {
  using type = T;
};
template <typename T>
using real_of_t = typename real_of<T>::type;

template <typename T>
T scalar_cast(double x) {
  return static_cast<T>(static_cast<real_of_t<T>>(x));
}

}  // namespace detail

/// Matrix-free sigma*I + gamma*(I(x)I(x)K + I(x)K(x)I + K(x)I(x)I) on an
/// n^3 grid stored lexicographically x-fastest: x[i + j*n + k*n*n].
/// K is the 1D stencil per direction; ghost values outside a Dirichlet
/// domain are identically zero, the periodic stencil wraps around.
struct KronSumOperator {
  int n = 0;
  Stencil1D stencil = Stencil1D::DirichletLaplace1D;
  double sigma = 0.0;
  double gamma = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(n) * n * n; }

  template <typename T>
  void apply(const std::vector<T>& x, std::vector<T>& out) const;
};

/// Count of apply() calls per arithmetic precision since the last reset.
/// Instrumentation for precision-isolation checks; not thread-safe across
/// concurrent solves.
long long kron_apply_count(Precision p);
void reset_kron_apply_counts();

enum class Equation { Heat, Advection };

inline const char* to_string(Equation e) { return e == Equation::Heat ? "heat" : "advection"; }

/// Discretized test problem du/dt = K u (+ g).
///
/// Heat: zero Dirichlet data on the unit cube, nodes at multiples of
/// h = 1/(n-1) per direction, K = -(1/h^2) * KronSum(tridiag(-1,2,-1)),
/// constant forcing g(x) = sin(pi x1) sin(pi x2) sin(pi x3) and the matching
/// closed-form solution.
///
/// Advection: periodic unit cube, nodes at multiples of h = 1/n,
/// K = -(1/(2h)) * KronSum(central difference), Gaussian initial state
/// exp(-100 * sum((x_i - 1/2)^2)), no forcing.
struct ProblemSpec {
  Equation equation = Equation::Heat;
  int n = 0;
  double h = 0.0;
  KronSumOperator k_op;                   ///< sigma = 0, gamma = stencil scale
  std::vector<double> initial_state;      ///< length n^3
  std::vector<double> forcing;            ///< length n^3; empty for advection
  ScalarKind precond_kind = ScalarKind::Real;

  std::size_t size() const { return k_op.size(); }
};

ProblemSpec make_problem(Equation eq, int n);

/// Analytic heat solution sampled at the grid nodes at time t:
/// u(x, t) = g(x) (1 - exp(-3 pi^2 t)) / (3 pi^2).
/// Throws WrongEquation for non-heat problems.
std::vector<double> heat_exact(const ProblemSpec& p, double t);

/// Stage system matrix I - tau*a*K as a KronSumOperator
/// (sigma = 1, gamma = -tau*a*(stencil scale of K)).
KronSumOperator stage_operator(const ProblemSpec& p, double tau, double a);

/// f(u) = K u (+ g) evaluated entirely in the requested arithmetic: the F32
/// path narrows the input, runs the stencil and forcing add in binary32 and
/// widens the result, which is exactly the low-precision evaluation the
/// A_eps tableau entries select.
std::vector<double> apply_f(const ProblemSpec& p, const std::vector<double>& u, Precision prec);

/// PrecVector boundary form of the same operation for a bare operator
/// (no forcing term).
PrecVector apply(const KronSumOperator& op, const PrecVector& x, Precision out_precision);

/// ||f(u) - f_eps(u)||_inf / 2^-24, the measured low-precision defect in
/// units of the binary32 rounding.
double perturbation_norm(const ProblemSpec& p, const std::vector<double>& u);

// --- implementation -------------------------------------------------------

namespace detail {
void count_kron_apply(bool f32);
}

template <typename T>
void KronSumOperator::apply(const std::vector<T>& x, std::vector<T>& out) const {
  if (n < 2) throw DimensionTooSmall("KronSumOperator: n must be at least 2");
  if (x.size() != size()) throw LengthMismatch("KronSumOperator: input length != n^3");
  out.resize(x.size());
  detail::count_kron_apply(sizeof(detail::real_of_t<T>) == sizeof(float));

  const T s = detail::scalar_cast<T>(sigma);
  const T g = detail::scalar_cast<T>(gamma);
  const std::ptrdiff_t nn = n;
  const std::ptrdiff_t n2 = nn * nn;

  if (stencil == Stencil1D::DirichletLaplace1D) {
    const T six = detail::scalar_cast<T>(6.0);
#pragma omp parallel for collapse(2)
    for (std::ptrdiff_t k = 0; k < nn; ++k) {
      for (std::ptrdiff_t j = 0; j < nn; ++j) {
        const std::ptrdiff_t base = j * nn + k * n2;
        for (std::ptrdiff_t i = 0; i < nn; ++i) {
          const std::ptrdiff_t idx = base + i;
          T acc = six * x[idx];
          if (i > 0) acc -= x[idx - 1];
          if (i < nn - 1) acc -= x[idx + 1];
          if (j > 0) acc -= x[idx - nn];
          if (j < nn - 1) acc -= x[idx + nn];
          if (k > 0) acc -= x[idx - n2];
          if (k < nn - 1) acc -= x[idx + n2];
          out[idx] = s * x[idx] + g * acc;
        }
      }
    }
  } else {
#pragma omp parallel for collapse(2)
    for (std::ptrdiff_t k = 0; k < nn; ++k) {
      for (std::ptrdiff_t j = 0; j < nn; ++j) {
        const std::ptrdiff_t kp = (k + 1 == nn ? 0 : k + 1) * n2, km = (k == 0 ? nn - 1 : k - 1) * n2;
        const std::ptrdiff_t jp = (j + 1 == nn ? 0 : j + 1) * nn, jm = (j == 0 ? nn - 1 : j - 1) * nn;
        const std::ptrdiff_t jb = j * nn, kb = k * n2;
        for (std::ptrdiff_t i = 0; i < nn; ++i) {
          const std::ptrdiff_t ip = i + 1 == nn ? 0 : i + 1, im = i == 0 ? nn - 1 : i - 1;
          T acc = x[ip + jb + kb] - x[im + jb + kb];
          acc += x[i + jp + kb] - x[i + jm + kb];
          acc += x[i + jb + kp] - x[i + jb + km];
          out[i + jb + kb] = s * x[i + jb + kb] + g * acc;
        }
      }
    }
  }
}

}  // namespace mprk
