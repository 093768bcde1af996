#include "mprk/spectral.hpp"

#include <cmath>
#include <numbers>

#include "mprk/errors.hpp"
#include "mprk/precision.hpp"

namespace mprk {

SpectralFactor<double> spectral_dirichlet(int n, double sigma, double gamma) {
  if (n < 2) throw DimensionTooSmall("spectral_dirichlet: n must be at least 2");
  SpectralFactor<double> f;
  f.n = n;
  f.q.resize(static_cast<std::size_t>(n) * n);
  f.lambda.resize(n);
  const double norm = std::sqrt(2.0 / (n + 1));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      f.q[static_cast<std::size_t>(j) * n + k] =
          norm * std::sin((j + 1) * (k + 1) * std::numbers::pi / (n + 1));
  // The normalized sine basis is symmetric and orthonormal, so the inverse
  // is the (identical) transpose; keep a separate copy anyway so both sides
  // of the transform stay independent storage.
  f.q_inv = f.q;
  for (int k = 0; k < n; ++k)
    f.lambda[k] = sigma + gamma * (2.0 - 2.0 * std::cos((k + 1) * std::numbers::pi / (n + 1)));
  return f;
}

SpectralFactor<std::complex<double>> spectral_periodic(int n, double sigma, double gamma) {
  if (n < 3) throw DimensionTooSmall("spectral_periodic: n must be at least 3");
  SpectralFactor<std::complex<double>> f;
  f.n = n;
  f.q.resize(static_cast<std::size_t>(n) * n);
  f.q_inv.resize(f.q.size());
  f.lambda.resize(n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      // omega^{jk} with the angle reduced mod n before scaling, which keeps
      // the sampled phases exact multiples of 2*pi/n.
      const double angle = 2.0 * std::numbers::pi * ((static_cast<long long>(j) * k) % n) / n;
      f.q[static_cast<std::size_t>(j) * n + k] = std::polar(norm, angle);
      f.q_inv[static_cast<std::size_t>(k) * n + j] = std::polar(norm, -angle);
    }
  for (int k = 0; k < n; ++k)
    f.lambda[k] = std::complex<double>(sigma, 0.0) +
                  gamma * std::complex<double>(0.0, 2.0 * std::sin(2.0 * std::numbers::pi * k / n));
  return f;
}

SpectralFactor<float> downcast_factor(const SpectralFactor<double>& f) {
  SpectralFactor<float> g;
  g.n = f.n;
  g.q = downcast(f.q);
  g.q_inv = downcast(f.q_inv);
  g.lambda = downcast(f.lambda);
  return g;
}

SpectralFactor<std::complex<float>> downcast_factor(const SpectralFactor<std::complex<double>>& f) {
  SpectralFactor<std::complex<float>> g;
  g.n = f.n;
  g.q = downcast(f.q);
  g.q_inv = downcast(f.q_inv);
  g.lambda = downcast(f.lambda);
  return g;
}

}  // namespace mprk
