#pragma once

// Dense reference implementations used only by the test suites.  Everything
// here takes the slow, obvious route (explicit matrices, Laplace-expansion
// inverses, textbook LU) so the matrix-free kernels have an independent
// answer to match.

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "mprk/spectral.hpp"

namespace oracle {

using cd = std::complex<double>;

// y = A x for a square row-major matrix.
template <typename T>
std::vector<T> matvec(const std::vector<T>& a, std::size_t n, const std::vector<T>& x) {
  std::vector<T> y(n, T{});
  for (std::size_t i = 0; i < n; ++i) {
    T acc{};
    for (std::size_t j = 0; j < n; ++j) acc += a[i * n + j] * x[j];
    y[i] = acc;
  }
  return y;
}

// Solve A x = b by partial-pivot Gaussian elimination (copy of A).
template <typename T>
std::vector<T> lu_solve(std::vector<T> a, std::size_t n, std::vector<T> b) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = std::abs(a[col * n + col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double mag = std::abs(a[r * n + col]);
      if (mag > best) {
        best = mag;
        piv = r;
      }
    }
    if (!(best > 0.0)) throw std::runtime_error("oracle::lu_solve: singular matrix");
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[col * n + j], a[piv * n + j]);
      std::swap(b[col], b[piv]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const T f = a[r * n + col] / a[col * n + col];
      if (f == T{}) continue;
      for (std::size_t j = col; j < n; ++j) a[r * n + j] -= f * a[col * n + j];
      b[r] -= f * b[col];
    }
  }
  std::vector<T> x(n, T{});
  for (std::size_t ii = n; ii-- > 0;) {
    T acc = b[ii];
    for (std::size_t j = ii + 1; j < n; ++j) acc -= a[ii * n + j] * x[j];
    x[ii] = acc / a[ii * n + ii];
  }
  return x;
}

// Determinant by recursive Laplace expansion along the first row (n <= 6).
inline cd det_laplace(const std::vector<cd>& a, std::size_t n) {
  if (n == 1) return a[0];
  cd acc{};
  std::vector<cd> minor((n - 1) * (n - 1));
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t r = 1; r < n; ++r) {
      std::size_t mc = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == c) continue;
        minor[(r - 1) * (n - 1) + mc++] = a[r * n + j];
      }
    }
    const cd term = a[c] * det_laplace(minor, n - 1);
    acc += (c % 2 == 0) ? term : -term;
  }
  return acc;
}

// Explicit inverse through cofactors (n <= 6): adj(A)^T / det(A).
inline std::vector<cd> inverse_cofactor(const std::vector<cd>& a, std::size_t n) {
  const cd det = det_laplace(a, n);
  if (std::abs(det) == 0.0) throw std::runtime_error("oracle::inverse_cofactor: singular matrix");
  std::vector<cd> inv(n * n);
  std::vector<cd> minor((n - 1) * (n - 1));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t mr = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == r) continue;
        std::size_t mc = 0;
        for (std::size_t j = 0; j < n; ++j) {
          if (j == c) continue;
          minor[mr * (n - 1) + mc++] = a[i * n + j];
        }
        ++mr;
      }
      const cd cof = (n == 1) ? cd{1} : det_laplace(minor, n - 1);
      inv[c * n + r] = (((r + c) % 2 == 0) ? cof : -cof) / det;
    }
  return inv;
}

// Dense n-by-n 1D stencil blocks.
inline std::vector<double> dense_stencil_1d(mprk::Stencil1D kind, std::size_t n) {
  std::vector<double> k(n * n, 0.0);
  if (kind == mprk::Stencil1D::DirichletLaplace1D) {
    for (std::size_t i = 0; i < n; ++i) {
      k[i * n + i] = 2.0;
      if (i > 0) k[i * n + i - 1] = -1.0;
      if (i + 1 < n) k[i * n + i + 1] = -1.0;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      k[i * n + (i + 1) % n] += 1.0;
      k[i * n + (i + n - 1) % n] -= 1.0;
    }
  }
  return k;
}

// Dense sigma*I + gamma*(I(x)I(x)K + I(x)K(x)I + K(x)I(x)I) with the
// x-fastest flattening idx = i + j*n + k*n^2.
inline std::vector<double> dense_kron_sum(const std::vector<double>& k1d, std::size_t n,
                                          double sigma, double gamma) {
  const std::size_t nn = n * n * n;
  std::vector<double> a(nn * nn, 0.0);
  auto flat = [n](std::size_t i, std::size_t j, std::size_t k) { return i + j * n + k * n * n; };
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t row = flat(i, j, k);
        a[row * nn + row] += sigma;
        for (std::size_t q = 0; q < n; ++q) {
          a[row * nn + flat(q, j, k)] += gamma * k1d[i * n + q];
          a[row * nn + flat(i, q, k)] += gamma * k1d[j * n + q];
          a[row * nn + flat(i, j, q)] += gamma * k1d[k * n + q];
        }
      }
  return a;
}

// Dense (C (x) B (x) A) under the same flattening.
template <typename T>
std::vector<T> dense_kron3(const std::vector<T>& a, const std::vector<T>& b,
                           const std::vector<T>& c, std::size_t n) {
  const std::size_t nn = n * n * n;
  std::vector<T> m(nn * nn, T{});
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t kk = 0; kk < n; ++kk)
          for (std::size_t jj = 0; jj < n; ++jj)
            for (std::size_t ii = 0; ii < n; ++ii)
              m[(i + j * n + k * n * n) * nn + (ii + jj * n + kk * n * n)] =
                  c[k * n + kk] * b[j * n + jj] * a[i * n + ii];
  return m;
}

// Existence of an (unpivoted) Cholesky factorization == SPD.
inline bool cholesky_exists(std::vector<double> a, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
    if (!(d > 0.0)) return false;
    const double l = std::sqrt(d);
    a[j * n + j] = l;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) v -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = v / l;
    }
  }
  return true;
}

}  // namespace oracle
