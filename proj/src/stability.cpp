#include "mprk/stability.hpp"

#include <cmath>
#include <limits>

#include "mprk/errors.hpp"
#include "mprk/precision.hpp"

namespace mprk {

namespace {

using cd = std::complex<double>;
// Extended precision inside the solve: corrector chains amplify roundoff by
// |z/2|^(q-1), which binary64 alone cannot absorb at q = 9, |z| = 10.
using cl = std::complex<long double>;

/// Partial-pivot Gaussian elimination on a row-major q-by-q system.
std::vector<cl> solve_dense(std::vector<cl> m, std::vector<cl> rhs, int q) {
  long double scale = 0.0;
  for (const cl& v : m) scale = std::max(scale, std::abs(v));
  const long double tiny = scale * q * std::numeric_limits<double>::epsilon();

  for (int col = 0; col < q; ++col) {
    int piv = col;
    long double best = std::abs(m[col * q + col]);
    for (int r = col + 1; r < q; ++r) {
      const long double mag = std::abs(m[r * q + col]);
      if (mag > best) {
        best = mag;
        piv = r;
      }
    }
    if (best <= tiny) throw SingularSystem("stability_function: I - zA is singular");
    if (piv != col) {
      for (int j = 0; j < q; ++j) std::swap(m[col * q + j], m[piv * q + j]);
      std::swap(rhs[col], rhs[piv]);
    }
    for (int r = col + 1; r < q; ++r) {
      const cl f = m[r * q + col] / m[col * q + col];
      if (f == cl{}) continue;
      for (int j = col; j < q; ++j) m[r * q + j] -= f * m[col * q + j];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<cl> x(q);
  for (int i = q; i-- > 0;) {
    cl acc = rhs[i];
    for (int j = i + 1; j < q; ++j) acc -= m[i * q + j] * x[j];
    x[i] = acc / m[i * q + i];
  }
  return x;
}

}  // namespace

std::complex<double> stability_function(const ButcherTableau& t, std::complex<double> z) {
  const int q = t.q;
  const cl zl{z.real(), z.imag()};
  std::vector<cl> m(static_cast<std::size_t>(q) * q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      const long double a =
          static_cast<long double>(t.a_high[i][j]) + static_cast<long double>(t.a_eps[i][j]);
      m[i * q + j] = (i == j ? cl{1.0L} : cl{}) - zl * a;
    }
  const std::vector<cl> w = solve_dense(std::move(m), std::vector<cl>(q, cl{1.0L}), q);
  cl acc{};
  for (int i = 0; i < q; ++i) acc += static_cast<long double>(t.b[i]) * w[i];
  const cl r = cl{1.0L} + zl * acc;
  return {static_cast<double>(r.real()), static_cast<double>(r.imag())};
}

std::complex<double> corrected_midpoint_reference(std::complex<double> z) {
  if (z == cd{2.0}) throw PoleAtTwo("corrected_midpoint_reference: pole at z == 2");
  return (z + 2.0) / (2.0 - z);
}

ButcherTableau truncate_eps(const ButcherTableau& t, FloatFormat fmt) {
  ButcherTableau out = t;
  for (auto& row : out.a_eps)
    for (double& v : row) v = fmt == FloatFormat::Binary16 ? round_binary16(v) : round_binary32(v);
  for (int i = 0; i < out.q; ++i) {
    double acc = 0.0;
    for (int j = 0; j < out.q; ++j) acc += out.a_high[i][j] + out.a_eps[i][j];
    out.c[i] = acc;
  }
  out.name += fmt == FloatFormat::Binary16 ? "+b16" : "+b32";
  return out;
}

long StabilityGrid::stable_count() const {
  long acc = 0;
  for (const std::uint8_t s : stable) acc += s;
  return acc;
}

StabilityGrid region_scan(const ButcherTableau& t, double re_min, double re_max, double im_min,
                          double im_max, int nx, int ny) {
  if (nx < 2 || ny < 2) throw DimensionTooSmall("region_scan: lattice needs at least 2x2 points");
  if (static_cast<double>(nx) * ny > 1e7) throw Error("region_scan: lattice exceeds 1e7 points");
  if (!(re_max > re_min) || !(im_max > im_min)) throw Error("region_scan: empty window");

  StabilityGrid g;
  g.re_min = re_min;
  g.re_max = re_max;
  g.im_min = im_min;
  g.im_max = im_max;
  g.nx = nx;
  g.ny = ny;
  g.values.resize(static_cast<std::size_t>(nx) * ny);
  g.stable.resize(g.values.size());

#pragma omp parallel for
  for (int ix = 0; ix < nx; ++ix) {
    for (int iy = 0; iy < ny; ++iy) {
      double mag;
      try {
        const cd r = stability_function(t, {g.re_at(ix), g.im_at(iy)});
        mag = std::abs(r);
        if (std::isnan(mag)) mag = std::numeric_limits<double>::infinity();
      } catch (const SingularSystem&) {
        mag = std::numeric_limits<double>::infinity();
      }
      g.values[static_cast<std::size_t>(ix) * ny + iy] = mag;
      g.stable[static_cast<std::size_t>(ix) * ny + iy] = mag <= 1.0 ? 1 : 0;
    }
  }
  return g;
}

}  // namespace mprk
