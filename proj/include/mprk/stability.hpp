#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "mprk/tableau.hpp"

namespace mprk {

enum class FloatFormat { Binary16, Binary32 };

/// Amplification factor R(z) = 1 + z b^T (I - zA)^{-1} e with A = A_high +
/// A_eps, evaluated through a dense partial-pivot complex solve.
/// Throws SingularSystem when I - zA is numerically singular (z at a pole).
std::complex<double> stability_function(const ButcherTableau& t, std::complex<double> z);

/// Closed form (z+2)/(2-z) shared by the corrected midpoint family for
/// every corrector count.  Throws PoleAtTwo at z == 2.
std::complex<double> corrected_midpoint_reference(std::complex<double> z);

/// Copy of the tableau whose A_eps entries are rounded to the nearest value
/// of the target format (ties to even) and widened back to binary64; c is
/// re-derived from the perturbed row sums.
ButcherTableau truncate_eps(const ButcherTableau& t, FloatFormat fmt);

/// |R| sampled on an inclusive lattice over a complex-plane window.
struct StabilityGrid {
  double re_min = 0, re_max = 0, im_min = 0, im_max = 0;
  int nx = 0, ny = 0;
  std::vector<double> values;        ///< |R|, row-major, index ix*ny + iy; +inf at poles
  std::vector<std::uint8_t> stable;  ///< values <= 1, same layout

  double re_at(int ix) const { return re_min + (re_max - re_min) * ix / (nx - 1); }
  double im_at(int iy) const { return im_min + (im_max - im_min) * iy / (ny - 1); }
  long stable_count() const;
};

/// Evaluate |R| on an nx-by-ny lattice with inclusive endpoints.
/// Requires nx, ny >= 2 and nx*ny <= 1e7.
StabilityGrid region_scan(const ButcherTableau& t, double re_min, double re_max, double im_min,
                          double im_max, int nx, int ny);

}  // namespace mprk
