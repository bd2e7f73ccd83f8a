#pragma once

// Bath correlation function of a single antisymmetrized Lorentzian density
// J(ω) = p·L(ω;Ω,Γ), L = (π/2)·ω/(((ω+Ω)²+Γ²)((ω−Ω)²+Γ²)), at inverse
// temperature β (unit weight p = 1 here; scale linearly):
//
//   ξ(t) = (π/2) [ e^{−Γt}/(8ΩΓ) · ( coth(β(Ω+iΓ)/2) e^{iΩt}
//                                   + coth(β(Ω−iΓ)/2) e^{−iΩt} + 2i sin Ωt )
//                  − (2/β) Σ_{k≥1} ν_k e^{−ν_k t} / D(ν_k) ],
//
// with Matsubara frequencies ν_k = 2πk/β and
// D(ν) = (Ω²+Γ²−ν²)² + 4Ω²ν². The series is summed to K terms with a
// certified bound on the omitted tail.
//
// Tail certificate. Write B = Ω²+Γ². For ν ≥ 2√B one has
// D(ν) = (ν²−B)² + 4Γ²ν² ≥ (ν²−B)² ≥ (9/16)ν⁴, hence
//
//   Σ_{k>K} ν_k e^{−ν_k t}/D(ν_k) ≤ (16/9) Σ_{k>K} e^{−ν_k t}/ν_k³
//     ≤ (16/9) · e^{−ν_{K+1} t} / (ν_{K+1}³ (1 − e^{−ν₁ t}))     (t > 0, geometric)
//     ≤ (16/9) · (β/2π)³ / (2K²)                                  (any t ≥ 0, ζ-tail)
//
// requiring ν_{K+1} ≥ 2√B before a certificate is issued. The same
// D ≥ (9/16)ν⁴ envelope also certifies ∫_T^∞ of the modulus, used for
// horizon truncation of time integrals.

#include <cmath>
#include <complex>

#include "specbound/core.hpp"
#include "specbound/math/stable.hpp"

namespace specbound::corr {

struct MatsubaraSum {
  double beta = 1.0;       // > 0
  int terms = 0;           // retained terms K ≥ 0
  double tail_bound = 0;   // certified bound on the omitted k > K part
};

struct LorentzianResult {
  std::complex<double> value{};
  double tail_bound = 0.0;  // certified |omitted Matsubara tail| of ξ
  int terms = 0;
};

namespace detail {

inline double matsubara_nu(double beta, int k) {
  return 2.0 * std::acos(-1.0) * k / beta;
}

inline double lorentz_denominator(double nu, double center, double width) {
  const double b = center * center + width * width;
  const double d = b - nu * nu;
  return d * d + 4.0 * center * center * nu * nu;
}

// Certified bound on Σ_{k>K} ν_k e^{−ν_k t}/D(ν_k); requires the gate
// ν_{K+1} ≥ 2√(Ω²+Γ²). Returns the smaller of the geometric (t > 0) and
// ζ-tail (any t) majorants.
inline double matsubara_series_tail(double center, double width, double beta, double t, int K) {
  const double b = center * center + width * width;
  const double nu1 = matsubara_nu(beta, 1);
  const double nuK1 = matsubara_nu(beta, K + 1);
  if (!(nuK1 >= 2.0 * std::sqrt(b)))
    throw TailNotCertifiable(
        "Matsubara tail: first omitted frequency must be ≥ 2·sqrt(Ω²+Γ²) for a certificate");
  const double pi = std::acos(-1.0);
  // Σ_{k>K} k⁻³ ≤ 1/(2K²) for K ≥ 1; for K = 0 use ζ(3) rounded up.
  const double zeta_factor = (K >= 1) ? 1.0 / (2.0 * static_cast<double>(K) * K) : 1.2020569;
  const double zeta_tail = (16.0 / 9.0) * std::pow(beta / (2.0 * pi), 3) * zeta_factor;
  if (!(t > 0.0)) return zeta_tail;
  const double geom =
      (16.0 / 9.0) * std::exp(-nuK1 * t) / (nuK1 * nuK1 * nuK1 * (-std::expm1(-nu1 * t)));
  return std::min(zeta_tail, geom);
}

}  // namespace detail

// ξ(t) for the unit-weight Lorentzian with K retained Matsubara terms and a
// certified tail bound. Throws TailNotCertifiable if K is too small for the
// safety gate at this β.
inline LorentzianResult xi_lorentzian_closed(double center, double width, double beta, double t,
                                             int K) {
  if (!(center > 0.0) || !(width > 0.0))
    throw DomainError("xi_lorentzian_closed: Ω and Γ must be > 0");
  if (!(beta > 0.0) || std::isinf(beta))
    throw DomainError("xi_lorentzian_closed: beta must be finite and > 0");
  if (!(t >= 0.0)) throw DomainError("xi_lorentzian_closed: t must be ≥ 0");
  if (K < 0) throw DomainError("xi_lorentzian_closed: K must be ≥ 0");

  using C = std::complex<double>;
  const double pi = std::acos(-1.0);
  const C i{0.0, 1.0};

  const C cth_p = math::coth(C(beta * center / 2.0, beta * width / 2.0));
  const C cth_m = math::coth(C(beta * center / 2.0, -beta * width / 2.0));
  const C osc = cth_p * std::exp(i * (center * t)) + cth_m * std::exp(-i * (center * t)) +
                2.0 * i * std::sin(center * t);
  const C resonant = std::exp(-width * t) / (8.0 * center * width) * osc;

  math::KahanSum acc;
  for (int k = 1; k <= K; ++k) {
    const double nu = detail::matsubara_nu(beta, k);
    acc.add(nu * std::exp(-nu * t) / detail::lorentz_denominator(nu, center, width));
  }
  const double series = acc.value();

  const double tail = detail::matsubara_series_tail(center, width, beta, t, K);

  LorentzianResult out;
  out.value = (pi / 2.0) * (resonant - (2.0 / beta) * series);
  out.tail_bound = (pi / beta) * tail;  // (π/2)·(2/β)·(series tail)
  out.terms = K;
  return out;
}

// Smallest K passing the safety gate at this β and bath geometry.
inline int matsubara_gate_terms(double center, double width, double beta) {
  const double b2 = 2.0 * std::sqrt(center * center + width * width);
  const double pi = std::acos(-1.0);
  const int k = static_cast<int>(std::ceil(b2 * beta / (2.0 * pi)));
  return std::max(1, k);
}

// ξ(t) with K chosen automatically so the certified tail is ≤ tol (and the
// safety gate holds). Grows K geometrically from the gate value.
inline LorentzianResult xi_lorentzian_auto(double center, double width, double beta, double t,
                                           double tol) {
  if (!(tol > 0.0)) throw DomainError("xi_lorentzian_auto: tol must be > 0");
  int K = matsubara_gate_terms(center, width, beta);
  for (int pass = 0; pass < 48; ++pass) {
    const double tail =
        (std::acos(-1.0) / beta) * detail::matsubara_series_tail(center, width, beta, t, K);
    if (tail <= tol) return xi_lorentzian_closed(center, width, beta, t, K);
    K = K * 2 + 1;
  }
  throw ToleranceNotMet("xi_lorentzian_auto: certified Matsubara tail did not reach tolerance");
}

}  // namespace specbound::corr
