#pragma once

#include <complex>
#include <vector>

#include "mprk/errors.hpp"
#include "mprk/operators.hpp"
#include "mprk/spectral.hpp"
#include "mprk/timing.hpp"

namespace mprk {

/// Which grid index a tensor contraction runs over, for vectors stored
/// x-fastest: R contracts the stride-1 index, M the stride-n index, L the
/// stride-n^2 index.
enum class TensorSide { L, M, R };

/// out_{ijk} = sum_q Q_{iq} x_{qjk} (R), sum_q Q_{jq} x_{iqk} (M),
/// sum_q Q_{kq} x_{ijq} (L).  Q is n-by-n row-major, x and out length n^3.
template <typename T>
void apply_tensor(TensorSide side, int n, const std::vector<T>& q_mat, const std::vector<T>& x,
                  std::vector<T>& out);

/// Exact inverse of P = I(x)I(x)A + I(x)B(x)I + C(x)I(x)I through the
/// eigendecompositions of the three 1D factors:
///   P^{-1} = (Q_C (x) Q_B (x) Q_A) diag(pd_inv) (Q_C^{-1.(x)..})
/// with pd_inv[i+jn+kn^2] = 1/(lambda_A[i] + lambda_B[j] + lambda_C[k]).
/// T selects the arithmetic: float/double for the Dirichlet (sine) factors,
/// complex for the periodic (Fourier) factors.
template <typename T>
class FastDiagPreconditioner {
 public:
  FastDiagPreconditioner() = default;

  /// Throws ZeroEigenvalueSum if any eigenvalue triple sums to zero.
  FastDiagPreconditioner(int n, std::vector<T> qa, std::vector<T> qa_inv, std::vector<T> qb,
                         std::vector<T> qb_inv, std::vector<T> qc, std::vector<T> qc_inv,
                         const std::vector<T>& lambda_a, const std::vector<T>& lambda_b,
                         const std::vector<T>& lambda_c);

  /// Seven timed sub-steps: tensor-r/m/l on the inverse side, diag, then
  /// tensor-r/m/l on the forward side, bracketed under "precond".
  void apply_inverse(const std::vector<T>& x, std::vector<T>& out, TimingRegistry* reg = nullptr) const;

  int n() const { return n_; }
  std::size_t size() const { return static_cast<std::size_t>(n_) * n_ * n_; }

 private:
  int n_ = 0;
  std::vector<T> qa_, qa_inv_, qb_, qb_inv_, qc_, qc_inv_;
  std::vector<T> pd_inv_;
  mutable std::vector<T> t1_, t2_;  // scratch, reused across applies
};

/// Preconditioner for the stage system I - tau*a*K of a problem: the
/// A-direction factor absorbs the identity shift (sigma = 1) together with
/// the stage scale gamma = -tau*a*(stencil scale); the B- and C-direction
/// factors carry sigma = 0 and the same gamma.  For the heat problem this
/// makes P equal to the stage operator itself.
FastDiagPreconditioner<double> build_heat_precond(const ProblemSpec& p, double tau, double a);
FastDiagPreconditioner<float> build_heat_precond_f32(const ProblemSpec& p, double tau, double a);
FastDiagPreconditioner<std::complex<double>> build_advection_precond(const ProblemSpec& p,
                                                                     double tau, double a);
FastDiagPreconditioner<std::complex<float>> build_advection_precond_f32(const ProblemSpec& p,
                                                                        double tau, double a);

// --- implementation -------------------------------------------------------

template <typename T>
void apply_tensor(TensorSide side, int n, const std::vector<T>& q_mat, const std::vector<T>& x,
                  std::vector<T>& out) {
  const std::ptrdiff_t nn = n;
  const std::ptrdiff_t n2 = nn * nn;
  if (q_mat.size() != static_cast<std::size_t>(n2)) throw LengthMismatch("apply_tensor: Q must be n*n");
  if (x.size() != static_cast<std::size_t>(n2 * nn)) throw LengthMismatch("apply_tensor: x must be n^3");
  out.resize(x.size());

  switch (side) {
    case TensorSide::R:
#pragma omp parallel for collapse(2)
      for (std::ptrdiff_t k = 0; k < nn; ++k)
        for (std::ptrdiff_t j = 0; j < nn; ++j) {
          const T* fiber = x.data() + j * nn + k * n2;
          T* dst = out.data() + j * nn + k * n2;
          for (std::ptrdiff_t i = 0; i < nn; ++i) {
            const T* row = q_mat.data() + i * nn;
            T acc{};
            for (std::ptrdiff_t q = 0; q < nn; ++q) acc += row[q] * fiber[q];
            dst[i] = acc;
          }
        }
      break;
    case TensorSide::M:
#pragma omp parallel for collapse(2)
      for (std::ptrdiff_t k = 0; k < nn; ++k)
        for (std::ptrdiff_t i = 0; i < nn; ++i) {
          const T* fiber = x.data() + i + k * n2;  // stride n
          T* dst = out.data() + i + k * n2;
          for (std::ptrdiff_t j = 0; j < nn; ++j) {
            const T* row = q_mat.data() + j * nn;
            T acc{};
            for (std::ptrdiff_t q = 0; q < nn; ++q) acc += row[q] * fiber[q * nn];
            dst[j * nn] = acc;
          }
        }
      break;
    case TensorSide::L:
#pragma omp parallel for collapse(2)
      for (std::ptrdiff_t j = 0; j < nn; ++j)
        for (std::ptrdiff_t i = 0; i < nn; ++i) {
          const T* fiber = x.data() + i + j * nn;  // stride n^2
          T* dst = out.data() + i + j * nn;
          for (std::ptrdiff_t k = 0; k < nn; ++k) {
            const T* row = q_mat.data() + k * nn;
            T acc{};
            for (std::ptrdiff_t q = 0; q < nn; ++q) acc += row[q] * fiber[q * n2];
            dst[k * n2] = acc;
          }
        }
      break;
  }
}

template <typename T>
FastDiagPreconditioner<T>::FastDiagPreconditioner(int n, std::vector<T> qa, std::vector<T> qa_inv,
                                                  std::vector<T> qb, std::vector<T> qb_inv,
                                                  std::vector<T> qc, std::vector<T> qc_inv,
                                                  const std::vector<T>& lambda_a,
                                                  const std::vector<T>& lambda_b,
                                                  const std::vector<T>& lambda_c)
    : n_(n),
      qa_(std::move(qa)),
      qa_inv_(std::move(qa_inv)),
      qb_(std::move(qb)),
      qb_inv_(std::move(qb_inv)),
      qc_(std::move(qc)),
      qc_inv_(std::move(qc_inv)) {
  if (n_ < 2) throw DimensionTooSmall("FastDiagPreconditioner: n must be at least 2");
  pd_inv_.resize(size());
  const T one = detail::scalar_cast<T>(1.0);
  for (std::ptrdiff_t k = 0; k < n_; ++k)
    for (std::ptrdiff_t j = 0; j < n_; ++j)
      for (std::ptrdiff_t i = 0; i < n_; ++i) {
        const T sum = lambda_a[i] + lambda_b[j] + lambda_c[k];
        if (sum == T{})
          throw ZeroEigenvalueSum("FastDiagPreconditioner: eigenvalue triple sums to zero at (" +
                                  std::to_string(i) + "," + std::to_string(j) + "," +
                                  std::to_string(k) + ")");
        pd_inv_[i + j * n_ + k * static_cast<std::ptrdiff_t>(n_) * n_] = one / sum;
      }
}

template <typename T>
void FastDiagPreconditioner<T>::apply_inverse(const std::vector<T>& x, std::vector<T>& out,
                                              TimingRegistry* reg) const {
  if (x.size() != size()) throw LengthMismatch("apply_inverse: input length != n^3");
  ScopedTimer bracket(reg, "precond");
  {
    ScopedTimer t(reg, "tensor-r");
    apply_tensor(TensorSide::R, n_, qa_inv_, x, t1_);
  }
  {
    ScopedTimer t(reg, "tensor-m");
    apply_tensor(TensorSide::M, n_, qb_inv_, t1_, t2_);
  }
  {
    ScopedTimer t(reg, "tensor-l");
    apply_tensor(TensorSide::L, n_, qc_inv_, t2_, t1_);
  }
  {
    ScopedTimer t(reg, "diag");
    for (std::size_t i = 0; i < t1_.size(); ++i) t1_[i] *= pd_inv_[i];
  }
  {
    ScopedTimer t(reg, "tensor-r");
    apply_tensor(TensorSide::R, n_, qa_, t1_, t2_);
  }
  {
    ScopedTimer t(reg, "tensor-m");
    apply_tensor(TensorSide::M, n_, qb_, t2_, t1_);
  }
  {
    ScopedTimer t(reg, "tensor-l");
    apply_tensor(TensorSide::L, n_, qc_, t1_, out);
  }
}

}  // namespace mprk
