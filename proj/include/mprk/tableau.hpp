#pragma once

#include <string>
#include <vector>

namespace mprk {

/// Square row-major coefficient block of a Butcher tableau.
using CoeffMatrix = std::vector<std::vector<double>>;

enum class Method { M4s3pA, M4s3pB, M4s3pC };

/// Runge-Kutta tableau with its coefficient matrix split into a
/// high-precision part and a low-precision part: A = A_high + A_eps.
/// Entries of A_eps mark the evaluations a mixed-precision run performs
/// in binary32; in particular every implicit (diagonal) coefficient lives
/// in A_eps.  c is derived from the row sums of A_high + A_eps.
struct ButcherTableau {
  std::string name;
  int q = 0;  ///< number of stages
  std::vector<double> c;
  CoeffMatrix a_high;
  CoeffMatrix a_eps;
  std::vector<double> b;
};

/// The three four-stage third-order schemes, coefficients parsed once from
/// their published 15-digit decimal representations.
const ButcherTableau& builtin_tableau(Method m);

Method method_from_name(const std::string& name);  ///< "4s3pA" | "4s3pB" | "4s3pC"

/// Implicit midpoint rule with p explicit corrector stages: q = p+1 stages,
/// A_eps carries 1/2 at (0,0), A_high carries 1/2 on the first subdiagonal,
/// b = (0, ..., 0, 1).  p = 0 is the plain implicit midpoint rule.
ButcherTableau midpoint_corrected(int p);

/// Structural checks: c against row sums and sum(b) == 1 (both to 1e-13),
/// lower-triangularity of A_high + A_eps, and a zero A_high diagonal.
/// Returns one human-readable line per violated invariant.
std::vector<std::string> validate(const ButcherTableau& t);

std::string tableau_to_json(const ButcherTableau& t);
ButcherTableau tableau_from_json(const std::string& text);

}  // namespace mprk
