#pragma once

// Closed-form bath correlation functions
//
//   ξ(t) = ∫₀^∞ (dω/π) J(ω) (coth(βω/2) cos ωt + i sin ωt)
//
// for the exponential-cutoff power-law densities J = π ω^s e^{−ω/Ω}
// (unit prefactor — scale results linearly) and for the delta mode.
// Finite-temperature ohmic/superohmic forms use the polygamma functions;
// at T = 0 every power s > 0 has the elementary form
//
//   ξ_{T=0}(t) = Γ(s+1) Ω^{s+1} / (1 − iΩt)^{s+1},
//
// from ∫₀^∞ ω^s e^{−ω(1/Ω − it)} dω. The subohmic (s = 1/2) family has no
// finite-β closed form; its zero- and high-temperature limits are exposed
// here and the generic quadrature path serves finite β. Every formula in
// this header is validated against quadrature of the defining integral in
// the test suite, which is what pins all sign and prefactor conventions.

#include <cmath>
#include <complex>

#include "specbound/core.hpp"
#include "specbound/math/polygamma.hpp"
#include "specbound/math/stable.hpp"

namespace specbound::corr {

using Complex = std::complex<double>;
inline constexpr Complex imag_unit{0.0, 1.0};

// ξ for J = π ω^s e^{−ω/Ω} at T = 0 (coth → 1), any real power s > 0.
inline Complex xi_power_zero_temp(double s, double cutoff, double t) {
  if (!(s > 0.0)) throw DomainError("xi_power_zero_temp: power must be > 0");
  if (!(cutoff > 0.0)) throw DomainError("xi_power_zero_temp: cutoff must be > 0");
  if (!(t >= 0.0)) throw DomainError("xi_power_zero_temp: t must be ≥ 0");
  const Complex base = 1.0 - imag_unit * (cutoff * t);
  return std::tgamma(s + 1.0) * std::pow(cutoff, s + 1.0) * std::pow(base, -(s + 1.0));
}

// ξ for J = π ω e^{−ω/Ω} at inverse temperature β:
//   ξ(t) = [ψ⁽¹⁾((1+iΩt)/(βΩ)) + ψ⁽¹⁾((1−iΩt)/(βΩ))]/β² + Ω²/(Ωt − i)².
// β = +infinity falls back to the zero-temperature form.
inline Complex xi_ohmic_closed(double cutoff, double beta, double t) {
  if (!(cutoff > 0.0)) throw DomainError("xi_ohmic_closed: cutoff must be > 0");
  if (!(beta > 0.0)) throw DomainError("xi_ohmic_closed: beta must be > 0");
  if (!(t >= 0.0)) throw DomainError("xi_ohmic_closed: t must be ≥ 0");
  if (std::isinf(beta)) return xi_power_zero_temp(1.0, cutoff, t);
  const Complex z = Complex(1.0, cutoff * t) / (beta * cutoff);
  // ψ⁽¹⁾(z̄) = conj(ψ⁽¹⁾(z)), so the polygamma pair is 2·Re ψ⁽¹⁾(z).
  const Complex thermal = 2.0 * std::real(math::polygamma(1, z)) / (beta * beta);
  const Complex edge = Complex(cutoff * t, -1.0);
  return thermal + cutoff * cutoff / (edge * edge);
}

// ξ for J = π ωⁿ e^{−ω/Ω}, n ≥ 2, at inverse temperature β:
//   ξ(t) = [ψ⁽ⁿ⁾((1+iΩt)/(βΩ)) + ψ⁽ⁿ⁾((1−iΩt)/(βΩ))]/(−β)^{n+1}
//          − n!·(−iΩ/(Ωt − i))^{n+1}.
inline Complex xi_superohmic_closed(int n, double cutoff, double beta, double t) {
  if (n < 2) throw DomainError("xi_superohmic_closed: exponent must be ≥ 2");
  if (!(cutoff > 0.0)) throw DomainError("xi_superohmic_closed: cutoff must be > 0");
  if (!(beta > 0.0)) throw DomainError("xi_superohmic_closed: beta must be > 0");
  if (!(t >= 0.0)) throw DomainError("xi_superohmic_closed: t must be ≥ 0");
  if (std::isinf(beta)) return xi_power_zero_temp(static_cast<double>(n), cutoff, t);
  const Complex z = Complex(1.0, cutoff * t) / (beta * cutoff);
  const double sign = (n % 2 == 0) ? -1.0 : 1.0;  // (−β)^{n+1} = sign·β^{n+1}
  const Complex thermal =
      2.0 * std::real(math::polygamma(n, z)) * sign / std::pow(beta, n + 1);
  const Complex ratio = -imag_unit * cutoff / Complex(cutoff * t, -1.0);
  return thermal - std::tgamma(n + 1.0) * std::pow(ratio, n + 1);
}

// Subohmic (J = π √ω e^{−ω/Ω}) zero-temperature limit:
//   ξ(t) = √(πΩ³) · e^{i(3/2)·arctan(Ωt)} / (2 (1+Ω²t²)^{3/4}),
// i.e. the s = 1/2 case of the generic zero-temperature form.
inline Complex xi_subohmic_zero_temp(double cutoff, double t) {
  return xi_power_zero_temp(0.5, cutoff, t);
}

// Subohmic high-temperature (β → 0) limit, leading order in 1/β:
//   Re ξ(t) = (1/β) √( 2πΩ (1+√(1+Ω²t²)) / (1+Ω²t²) ),
//   Im ξ(t) = √(πΩ³) sin((3/2)·arctan(Ωt)) / (2 (1+Ω²t²)^{3/4})
// (the imaginary part is β-independent and equals the zero-temperature one).
// The real part carries the slow 1/√t falloff characteristic of subohmic
// baths at high temperature.
inline Complex xi_subohmic_high_temp(double cutoff, double beta, double t) {
  if (!(cutoff > 0.0)) throw DomainError("xi_subohmic_high_temp: cutoff must be > 0");
  if (!(beta > 0.0) || std::isinf(beta))
    throw DomainError("xi_subohmic_high_temp: beta must be finite and > 0");
  if (!(t >= 0.0)) throw DomainError("xi_subohmic_high_temp: t must be ≥ 0");
  const double pi = std::acos(-1.0);
  const double u = 1.0 + cutoff * cutoff * t * t;
  const double re = std::sqrt(2.0 * pi * cutoff * (1.0 + std::sqrt(u)) / u) / beta;
  const double im =
      std::sqrt(pi * cutoff * cutoff * cutoff) * std::sin(1.5 * std::atan(cutoff * t)) /
      (2.0 * std::pow(u, 0.75));
  return Complex(re, im);
}

// Delta mode J = κ δ(ω−ω₀):  ξ(t) = (κ/π)(coth(βω₀/2) cos ω₀t + i sin ω₀t).
// Never decays; β = +infinity gives (κ/π) e^{iω₀t}.
inline Complex xi_delta_mode(double kappa, double omega0, double beta, double t) {
  if (!(omega0 > 0.0)) throw DomainError("xi_delta_mode: omega0 must be > 0");
  if (!(beta > 0.0)) throw DomainError("xi_delta_mode: beta must be > 0");
  const double pi = std::acos(-1.0);
  const double th = std::isinf(beta) ? 1.0 : math::coth(beta * omega0 / 2.0);
  return (kappa / pi) * Complex(th * std::cos(omega0 * t), std::sin(omega0 * t));
}

}  // namespace specbound::corr
