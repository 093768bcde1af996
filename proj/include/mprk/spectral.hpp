#pragma once

#include <complex>
#include <vector>

namespace mprk {

/// One-dimensional constituents of the Kronecker-sum operators.
enum class Stencil1D {
  DirichletLaplace1D,    ///< tridiag(-1, 2, -1), zero Dirichlet ghosts
  PeriodicCentralDiff1D  ///< tridiag(-1, 0, 1) with periodic wrap
};

/// Closed-form eigendecomposition M = Q diag(lambda) Qinv of
/// M = sigma*I + gamma*K_1D for one grid direction.  Matrices are n-by-n
/// row-major.  T is double (Dirichlet sine basis, orthonormal and
/// symmetric) or std::complex<double> (periodic Fourier basis, unitary).
template <typename T>
struct SpectralFactor {
  int n = 0;
  std::vector<T> q;       ///< eigenvector columns
  std::vector<T> q_inv;   ///< inverse: transpose resp. conjugate transpose
  std::vector<T> lambda;  ///< eigenvalues sigma + gamma * eig(K_1D)
};

/// Sine modes of the Dirichlet Laplacian: Q[j][k] ~ sin((j+1)(k+1)pi/(n+1)),
/// lambda_k = sigma + gamma*(2 - 2cos((k+1)pi/(n+1))).  Requires n >= 2.
SpectralFactor<double> spectral_dirichlet(int n, double sigma, double gamma);

/// Fourier modes of the periodic central difference: Q[j][k] = w^{jk}/sqrt(n)
/// with w = exp(2i pi/n), lambda_k = sigma + gamma*2i*sin(2 pi k/n).
/// Requires n >= 3.
SpectralFactor<std::complex<double>> spectral_periodic(int n, double sigma, double gamma);

/// Downcast every matrix and eigenvalue entry to binary32 storage.
SpectralFactor<float> downcast_factor(const SpectralFactor<double>& f);
SpectralFactor<std::complex<float>> downcast_factor(const SpectralFactor<std::complex<double>>& f);

}  // namespace mprk
