#pragma once

// Overflow- and cancellation-safe evaluations of the hyperbolic cotangent
// (the thermal occupation factor coth(βω/2)) for real and complex
// arguments, plus a compensated accumulator for long mixed-sign sums.

#include <cmath>
#include <complex>

#include "specbound/core.hpp"

namespace specbound::math {

// coth(x) for x > 0. Stable both as x → 0+ (grows like 1/x without
// cancellation, via expm1) and for large x (saturates to 1 exactly once
// 2/expm1(2x) underflows).
inline double coth(double x) {
  if (!(x > 0.0)) throw DomainError("coth: argument must be > 0");
  if (x > 360.0) return 1.0;  // 2/expm1(2x) < 1e-312, below double resolution
  return 1.0 + 2.0 / std::expm1(2.0 * x);
}

// coth(z) for complex z with Re z > 0.
//  |z| small      : Laurent series 1/z + z/3 − z³/45 + O(z⁵)
//  Re z large     : coth(z) = 1 + 2e^{−2z}(1 + e^{−2z} + ...) ≈ 1 + 2e^{−2z},
//                   which avoids overflowing cosh/sinh
//  otherwise      : (e^{2z}+1)/(e^{2z}−1) directly (|2 Re z| ≤ 44, safe)
// Principal-branch exponentials throughout. Accuracy degrades only within
// ~1e-10 of a pole z = iπk, which requires Re z ≈ 0 and is outside the
// region produced by physical parameters (Re z = βΩ/2 > 0 bounded away).
inline std::complex<double> coth(std::complex<double> z) {
  if (!(z.real() > 0.0)) throw DomainError("coth: Re z must be > 0");
  const double az = std::abs(z);
  if (az < 1e-4) {
    const std::complex<double> z2 = z * z;
    return 1.0 / z + z * (1.0 / 3.0 - z2 / 45.0);
  }
  if (z.real() > 22.0) {
    const std::complex<double> e = std::exp(-2.0 * z);  // |e| ≤ e^{−44}
    return 1.0 + 2.0 * e * (1.0 + e);
  }
  const std::complex<double> e = std::exp(2.0 * z);
  return (e + 1.0) / (e - 1.0);
}

// Kahan-compensated running sum; used where long mixed-sign series must
// stay monotone under term-by-term refinement.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  [[nodiscard]] double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

}  // namespace specbound::math
