#pragma once

// Stage-by-stage dense reference for one time step in full binary64 (the
// F64 policy evaluates every right-hand-side term in binary64, so no
// low-precision path appears here).  Implicit stages go through dense LU
// instead of the library's Krylov + fast-diagonalization route.

#include <vector>

#include "mprk/tableau.hpp"
#include "tests/support/dense.hpp"

namespace oracle {

// One step of tableau t applied to u' = K u (+ g), K dense N-by-N.
inline std::vector<double> dense_step(const mprk::ButcherTableau& t,
                                      const std::vector<double>& k_dense, std::size_t n,
                                      const std::vector<double>& g, std::vector<double> u,
                                      double tau) {
  auto f = [&](const std::vector<double>& y) {
    std::vector<double> v = matvec(k_dense, n, y);
    for (std::size_t i = 0; i < g.size(); ++i) v[i] += g[i];
    return v;
  };

  std::vector<std::vector<double>> f_of(t.q);
  std::vector<double> y;
  for (int s = 0; s < t.q; ++s) {
    std::vector<double> rhs = u;
    for (int j = 0; j < s; ++j) {
      const double w = t.a_high[s][j] + t.a_eps[s][j];
      if (w == 0.0) continue;
      for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += tau * w * f_of[j][i];
    }
    const double a = t.a_eps[s][s];
    if (a != 0.0) {
      for (std::size_t i = 0; i < g.size(); ++i) rhs[i] += tau * a * g[i];
      std::vector<double> m(n * n);
      for (std::size_t i = 0; i < n * n; ++i) m[i] = -tau * a * k_dense[i];
      for (std::size_t i = 0; i < n; ++i) m[i * n + i] += 1.0;
      y = lu_solve(std::move(m), n, rhs);
    } else {
      y = std::move(rhs);
    }
    f_of[s] = f(y);
  }
  for (int s = 0; s < t.q; ++s) {
    if (t.b[s] == 0.0) continue;
    for (std::size_t i = 0; i < u.size(); ++i) u[i] += tau * t.b[s] * f_of[s][i];
  }
  return u;
}

}  // namespace oracle
