#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "mprk/errors.hpp"

namespace mprk {

enum class Precision { F32, F64 };
enum class ScalarKind { Real, Complex };

inline const char* to_string(Precision p) { return p == Precision::F32 ? "f32" : "f64"; }

/// Smallest double whose binary32 round-to-nearest-even image is infinite:
/// the midpoint between the largest finite float (2^128 - 2^104) and 2^128.
inline constexpr double kBinary32OverflowThreshold = 3.402823669209384634633746074317e+38;  // 2^128 - 2^103

/// Round a 64-bit value to the nearest binary32 value (ties to even) and
/// widen back.  Values past the overflow threshold saturate to +/-infinity.
inline double round_binary32(double x) {
  if (std::isnan(x)) return x;
  if (std::abs(x) >= kBinary32OverflowThreshold)
    return std::copysign(std::numeric_limits<double>::infinity(), x);
  return static_cast<double>(static_cast<float>(x));
}

namespace detail {

/// Right shift with round-to-nearest-even on the dropped bits.  shift in [1, 63].
inline std::uint64_t shift_right_rne(std::uint64_t v, int shift) {
  const std::uint64_t kept = v >> shift;
  const std::uint64_t round_bit = (v >> (shift - 1)) & 1u;
  const bool sticky = shift >= 2 && (v & ((std::uint64_t{1} << (shift - 1)) - 1)) != 0;
  if (round_bit && (sticky || (kept & 1))) return kept + 1;
  return kept;
}

}  // namespace detail

/// Round a 64-bit value to the nearest binary16 value (1+5+10 bits, ties to
/// even, subnormals included) directly from the double encoding, avoiding the
/// double->float->half double-rounding hazard.  Returns the half encoding.
inline std::uint16_t to_binary16_bits(double x) {
  const std::uint64_t bits = std::bit_cast<std::uint64_t>(x);
  const std::uint16_t sign = static_cast<std::uint16_t>((bits >> 63) << 15);
  const int exp_field = static_cast<int>((bits >> 52) & 0x7FF);
  const std::uint64_t frac = bits & ((std::uint64_t{1} << 52) - 1);

  if (exp_field == 0x7FF) {
    if (frac != 0) return static_cast<std::uint16_t>(sign | 0x7E00);  // quiet NaN
    return static_cast<std::uint16_t>(sign | 0x7C00);                 // infinity
  }
  if (exp_field == 0) return sign;  // +-0 and double subnormals (< 2^-1022) flush to +-0

  int e = exp_field - 1023;
  std::uint64_t sig = (std::uint64_t{1} << 52) | frac;  // 53-bit significand, value sig * 2^(e-52)

  if (e >= 16) return static_cast<std::uint16_t>(sign | 0x7C00);
  if (e >= -14) {
    std::uint64_t rounded = detail::shift_right_rne(sig, 42);  // 11-bit significand
    if (rounded == 0x800) {                                    // carry: 2.0 * 2^e
      rounded = 0x400;
      ++e;
      if (e > 15) return static_cast<std::uint16_t>(sign | 0x7C00);
    }
    return static_cast<std::uint16_t>(sign | ((e + 15) << 10) | (rounded & 0x3FF));
  }
  if (e >= -25) {
    // Subnormal target: units of 2^-24.  A carry to 1024 lands on the
    // smallest normal encoding naturally.
    const std::uint64_t rounded = detail::shift_right_rne(sig, 42 + (-14 - e));
    return static_cast<std::uint16_t>(sign | rounded);
  }
  return sign;
}

/// Exact widening of a half encoding back to a double.
inline double from_binary16_bits(std::uint16_t h) {
  const double sign = (h & 0x8000) ? -1.0 : 1.0;
  const int exp_field = (h >> 10) & 0x1F;
  const int frac = h & 0x3FF;
  if (exp_field == 0x1F) {
    if (frac != 0) return std::numeric_limits<double>::quiet_NaN();
    return sign * std::numeric_limits<double>::infinity();
  }
  if (exp_field == 0) return sign * std::ldexp(static_cast<double>(frac), -24);
  return sign * std::ldexp(static_cast<double>(1024 + frac), exp_field - 25);
}

/// Round to the nearest binary16 value and widen back to a double.
inline double round_binary16(double x) { return from_binary16_bits(to_binary16_bits(x)); }

/// Narrow one entry to binary32, refusing values that round to infinity.
inline float downcast_scalar(double x) {
  if (!std::isnan(x) && std::abs(x) >= kBinary32OverflowThreshold)
    throw OverflowToInfinity("downcast: |" + std::to_string(x) + "| exceeds the binary32 range");
  return static_cast<float>(x);
}

inline std::complex<float> downcast_scalar(std::complex<double> z) {
  return {downcast_scalar(z.real()), downcast_scalar(z.imag())};
}

inline std::vector<float> downcast(const std::vector<double>& v) {
  std::vector<float> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = downcast_scalar(v[i]);
  return out;
}

inline std::vector<std::complex<float>> downcast(const std::vector<std::complex<double>>& v) {
  std::vector<std::complex<float>> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = downcast_scalar(v[i]);
  return out;
}

inline std::vector<double> upcast(const std::vector<float>& v) {
  return std::vector<double>(v.begin(), v.end());
}

inline std::vector<std::complex<double>> upcast(const std::vector<std::complex<float>>& v) {
  std::vector<std::complex<double>> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = {v[i].real(), v[i].imag()};
  return out;
}

/// Precision- and kind-tagged vector used at module boundaries.  Numeric
/// kernels work on the plain std::vector payloads; this wrapper carries the
/// runtime tags the interfaces select on.
class PrecVector {
 public:
  using Storage = std::variant<std::vector<float>, std::vector<double>,
                               std::vector<std::complex<float>>, std::vector<std::complex<double>>>;

  PrecVector() : data_(std::vector<double>{}) {}
  explicit PrecVector(std::vector<float> v) : data_(std::move(v)) {}
  explicit PrecVector(std::vector<double> v) : data_(std::move(v)) {}
  explicit PrecVector(std::vector<std::complex<float>> v) : data_(std::move(v)) {}
  explicit PrecVector(std::vector<std::complex<double>> v) : data_(std::move(v)) {}

  Precision precision() const {
    return std::holds_alternative<std::vector<float>>(data_) ||
                   std::holds_alternative<std::vector<std::complex<float>>>(data_)
               ? Precision::F32
               : Precision::F64;
  }

  ScalarKind kind() const {
    return std::holds_alternative<std::vector<std::complex<float>>>(data_) ||
                   std::holds_alternative<std::vector<std::complex<double>>>(data_)
               ? ScalarKind::Complex
               : ScalarKind::Real;
  }

  std::size_t size() const {
    return std::visit([](const auto& v) { return v.size(); }, data_);
  }

  bool all_finite() const {
    return std::visit(
        [](const auto& v) {
          for (const auto& x : v) {
            if constexpr (std::is_floating_point_v<std::decay_t<decltype(x)>>) {
              if (!std::isfinite(x)) return false;
            } else {
              if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
            }
          }
          return true;
        },
        data_);
  }

  /// Convert to the requested precision, preserving the scalar kind.
  /// Narrowing throws OverflowToInfinity on entries past the binary32 range.
  PrecVector to(Precision target) const {
    if (target == precision()) return *this;
    if (target == Precision::F32) {
      if (kind() == ScalarKind::Real) return PrecVector(downcast(std::get<std::vector<double>>(data_)));
      return PrecVector(downcast(std::get<std::vector<std::complex<double>>>(data_)));
    }
    if (kind() == ScalarKind::Real) return PrecVector(upcast(std::get<std::vector<float>>(data_)));
    return PrecVector(upcast(std::get<std::vector<std::complex<float>>>(data_)));
  }

  template <typename T>
  const std::vector<T>& as() const {
    if (!std::holds_alternative<std::vector<T>>(data_))
      throw Error("PrecVector: payload does not hold the requested scalar type");
    return std::get<std::vector<T>>(data_);
  }

  const Storage& storage() const { return data_; }

 private:
  Storage data_;
};

}  // namespace mprk
