#pragma once

// Direct quadrature of the defining correlation integral
//
//   ξ(t) = ∫₀^∞ (dω/π) J(ω) (coth(βω/2) cos ωt + i sin ωt)
//
// for any delta-free spectral density, with a certified absolute error.
//
// Scheme (per flattened atomic component, results combined linearly):
//   1. [0, a]   with a the component's envelope-monotone threshold:
//               adaptive Gauss–Kronrod panels; the subohmic √ω kink at
//               ω = 0 is removed by the substitution ω = u².
//   2. [a, X]   either plain adaptive panels (few oscillation periods) or,
//               when ωt oscillates many times before the envelope dies,
//               half-period segmentation at the trig zeros with the
//               alternating-series remainder bound: both envelopes
//               J·coth/π (real part) and J/π (imaginary part) are
//               monotone decreasing beyond a, so once the per-segment
//               integral falls below tolerance the omitted remainder is
//               certified by the last segment's magnitude.
//   3. beyond X: certified envelope-tail bound using |coth cos + i sin|
//               ≤ coth and closed-form majorants of ∫_X^∞ J/π·coth dω.
//
// Monotone thresholds: ω^s e^{−ω/Ω} (and times the decreasing coth) is
// decreasing for ω ≥ sΩ; the Lorentzian line ω/D(ω) is decreasing for
// ω² ≥ Ω²+Γ² since d/dω[ω/D] has sign (ω²−B)(−3ω²−B) − 4Γ²ω² < 0 there.
//
// Budget: max_evals integrand evaluations per call (default 1e6), split
// across components; exhaustion raises EvalBudgetExceeded.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <variant>
#include <vector>

#include "specbound/core.hpp"
#include "specbound/density.hpp"
#include "specbound/math/integrate.hpp"
#include "specbound/math/stable.hpp"

namespace specbound::corr {

struct XiQuadOptions {
  double abs_tol = 1e-9;
  std::size_t max_evals = 1'000'000;
};

struct XiQuadResult {
  std::complex<double> value{};
  double error = 0.0;  // certified absolute bound (panel estimates + tails)
  std::size_t evals = 0;
};

namespace qdetail {

inline double thermal_factor(double beta, double omega) {
  return std::isinf(beta) ? 1.0 : math::coth(beta * omega / 2.0);
}

// Atomic integrand geometry: either the exp-cutoff power family
// prefactor·ω^s·e^{−ω/Ω} (J/π form) or a unit-weight Lorentzian line.
struct ShapeProfile {
  bool lorentz = false;
  double power = 1.0;      // s ∈ {1/2, 1, 2, 3, …}
  double prefactor = 1.0;  // of J/π = prefactor·ω^s e^{−ω/Ω}
  double cutoff = 1.0;     // Ω
  double center = 0.0;     // Lorentzian Ω
  double width = 0.0;      // Lorentzian Γ

  [[nodiscard]] double density_over_pi(double w) const {
    if (lorentz) return prefactor * lorentzian_line(w, center, width) / std::acos(-1.0);
    return prefactor * std::pow(w, power) * std::exp(-w / cutoff);
  }

  // Envelope-monotone threshold a.
  [[nodiscard]] double mono_threshold() const {
    if (lorentz) return std::sqrt(center * center + width * width);
    return std::max(power, 1.0) * cutoff;
  }

  [[nodiscard]] bool needs_sqrt_substitution() const { return !lorentz && power < 1.0; }

  // Certified bound on ∫_X^∞ (J/π)·coth(βω/2) dω, which also bounds the
  // modulus of the omitted complex integrand (|coth·cos + i·sin| ≤ coth).
  [[nodiscard]] double envelope_tail(double X, double beta) const {
    const double th = qdetail::thermal_factor(beta, X);
    if (lorentz) {
      const double b = center * center + width * width;
      if (!(X * X >= 4.0 * b)) return std::numeric_limits<double>::infinity();
      return th * std::abs(prefactor) * (4.0 / 9.0) / (X * X);
    }
    // ∫_X^∞ ω^s e^{−ω/Ω} dω majorants.
    double e;
    if (power == 0.5) {
      e = cutoff * std::exp(-X / cutoff) * (std::sqrt(X) + cutoff / (2.0 * std::sqrt(X)));
    } else {
      const int s = static_cast<int>(power);
      double sum = 0.0;
      double fall = 1.0;  // s!/(s−j)! · Ω^j
      for (int j = 0; j <= s; ++j) {
        sum += fall * std::pow(X, s - j);
        fall *= (s - j) * cutoff;
      }
      e = cutoff * std::exp(-X / cutoff) * sum;
    }
    return th * std::abs(prefactor) * e;
  }
};

inline ShapeProfile profile_of(const AtomicComponent& c) {
  ShapeProfile p;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Ohmic>) {
          p.power = 1.0;
          p.prefactor = v.prefactor;
          p.cutoff = v.cutoff;
        } else if constexpr (std::is_same_v<T, Superohmic>) {
          p.power = static_cast<double>(v.exponent);
          p.prefactor = v.prefactor;
          p.cutoff = v.cutoff;
        } else if constexpr (std::is_same_v<T, Subohmic>) {
          p.power = 0.5;
          p.prefactor = v.prefactor;
          p.cutoff = v.cutoff;
        } else if constexpr (std::is_same_v<T, LorentzianTerm>) {
          p.lorentz = true;
          p.prefactor = v.p;  // flatten() emits p = 1; kept for direct use
          p.center = v.omega;
          p.width = v.gamma;
        } else {
          static_assert(std::is_same_v<T, DeltaMode>);
          throw DeltaNotEvaluable("xi_quadrature: delta components have no quadrature form");
        }
      },
      c.shape);
  return p;
}

// Smallest X ≥ X0 with certified envelope tail ≤ tol (by doubling).
inline double tail_cut(const ShapeProfile& p, double beta, double X0, double tol) {
  double X = X0;
  for (int i = 0; i < 240; ++i) {
    if (p.envelope_tail(X, beta) <= tol) return X;
    X *= 2.0;
  }
  throw ToleranceNotMet("xi_quadrature: envelope tail would not reach tolerance");
}

struct TailPiece {
  double value = 0.0;
  double error = 0.0;
  std::size_t evals = 0;
};

// ∫_a^∞ g(ω)·trig(ωt) dω for g ≥ 0 decreasing on [a, ∞), by half-period
// segments at the trig zeros. Stops once a full segment's magnitude is
// ≤ stop_tol; the alternating-series remainder is then ≤ that magnitude.
template <class G>
TailPiece oscillatory_tail(G&& g, double a, double t, bool use_cos, double stop_tol,
                           double refine_tol, std::size_t max_evals) {
  const double pi = std::acos(-1.0);
  const double half = pi / t;
  // First trig zero strictly beyond a.
  double k = std::floor(use_cos ? (a * t / pi - 0.5) : (a * t / pi));
  auto zero_at = [&](double j) { return use_cos ? (j + 0.5) * half : j * half; };
  double first = zero_at(k);
  while (first <= a) first = zero_at(++k);

  auto f = [&](double w) { return g(w) * (use_cos ? std::cos(w * t) : std::sin(w * t)); };

  std::vector<math::Panel<double>> panels;
  TailPiece out;
  double prev = a;
  double next = first;
  double last_mag = std::numeric_limits<double>::infinity();
  bool stopped = false;
  const std::size_t max_segments = std::max<std::size_t>(16, max_evals / 30);
  for (std::size_t seg = 0; seg < max_segments; ++seg) {
    auto panel = math::gk15_panel<double>(f, prev, next);
    out.evals += 15;
    panels.push_back(panel);
    const bool full_segment = seg > 0;  // [a, first] is partial
    if (full_segment) {
      last_mag = std::abs(panel.integral);
      if (last_mag <= stop_tol) {
        stopped = true;
        break;
      }
    }
    prev = next;
    next += half;
  }
  if (!stopped)
    throw EvalBudgetExceeded("xi_quadrature: oscillatory segment march exhausted its budget");

  math::IntegrateOptions ropt;
  ropt.abs_tol = refine_tol;
  ropt.max_evals = max_evals > out.evals ? max_evals - out.evals : 0;
  auto refined = math::refine_panels<double>(f, panels, ropt);
  out.value = refined.value;
  out.error = refined.error + last_mag;  // panel estimates + alternating remainder
  out.evals += refined.evals;
  if (!refined.converged)
    throw EvalBudgetExceeded("xi_quadrature: oscillatory refinement exhausted its budget");
  return out;
}

}  // namespace qdetail

// Correlation of a single atomic component (unit combination coefficient).
inline XiQuadResult xi_quadrature_component(const AtomicComponent& comp, double beta, double t,
                                            const XiQuadOptions& opt) {
  using C = std::complex<double>;
  const qdetail::ShapeProfile prof = qdetail::profile_of(comp);
  const double tol = opt.abs_tol;

  auto integrand = [&](double w) -> C {
    const double g = prof.density_over_pi(w);
    return C(g * qdetail::thermal_factor(beta, w) * std::cos(w * t), g * std::sin(w * t));
  };

  XiQuadResult out;
  const double a = prof.mono_threshold();

  // ---- head: [0, a] ----
  {
    std::vector<double> breaks;
    if (prof.lorentz) {
      // seed near the resonance peak so adaptivity starts resolved
      for (double x : {0.0, prof.center - 3.0 * prof.width, prof.center - prof.width, prof.center,
                       prof.center + prof.width, a})
        if (x > (breaks.empty() ? -1.0 : breaks.back()) && x >= 0.0 && x <= a) breaks.push_back(x);
      if (breaks.front() != 0.0) breaks.insert(breaks.begin(), 0.0);
      if (breaks.back() != a) breaks.push_back(a);
    } else {
      breaks = {0.0, a};
    }
    math::IntegrateOptions hopt;
    hopt.abs_tol = tol / 4.0;
    hopt.max_evals = opt.max_evals / 2;
    math::IntegrateResult<C> head;
    if (prof.needs_sqrt_substitution()) {
      auto fu = [&](double u) { return 2.0 * u * integrand(u * u); };
      std::vector<double> ubreaks;
      for (double b : breaks) ubreaks.push_back(std::sqrt(b));
      head = math::integrate_partition<C>(fu, ubreaks, hopt);
    } else {
      head = math::integrate_partition<C>(integrand, breaks, hopt);
    }
    if (!head.converged)
      throw EvalBudgetExceeded("xi_quadrature: head region exhausted its budget");
    out.value += head.value;
    out.error += head.error;
    out.evals += head.evals;
  }

  // ---- mid + tail: [a, ∞) ----
  const double X = qdetail::tail_cut(prof, beta, std::max(a, 2.0 * a), tol / 8.0);
  const double cycles = (X - a) * t / std::acos(-1.0);
  const std::size_t remaining =
      opt.max_evals > out.evals ? opt.max_evals - out.evals : std::size_t{0};
  if (cycles <= 8.0) {
    math::IntegrateOptions mopt;
    mopt.abs_tol = tol / 2.0;
    mopt.max_evals = remaining;
    auto mid = math::integrate_adaptive<C>(integrand, a, X, mopt);
    if (!mid.converged) throw EvalBudgetExceeded("xi_quadrature: mid region exhausted its budget");
    out.value += mid.value;
    out.error += mid.error + prof.envelope_tail(X, beta);
    out.evals += mid.evals;
  } else {
    auto g_re = [&](double w) {
      return prof.density_over_pi(w) * qdetail::thermal_factor(beta, w);
    };
    auto g_im = [&](double w) { return prof.density_over_pi(w); };
    auto re = qdetail::oscillatory_tail(g_re, a, t, /*use_cos=*/true, tol / 8.0, tol / 8.0,
                                        remaining / 2);
    auto im = qdetail::oscillatory_tail(g_im, a, t, /*use_cos=*/false, tol / 8.0, tol / 8.0,
                                        remaining / 2);
    out.value += C(re.value, im.value);
    out.error += re.error + im.error;
    out.evals += re.evals + im.evals;
  }
  return out;
}

// Correlation ξ(t) of a delta-free density by quadrature of the defining
// integral; absolute error ≤ opt.abs_tol (certified, reported in `error`).
inline XiQuadResult xi_quadrature(const SpectralDensity& density, double beta, double t,
                                  const XiQuadOptions& opt = {}) {
  if (!(beta > 0.0)) throw DomainError("xi_quadrature: beta must be > 0");
  if (!(t >= 0.0)) throw DomainError("xi_quadrature: t must be ≥ 0");
  if (!(opt.abs_tol > 0.0)) throw DomainError("xi_quadrature: abs_tol must be > 0");

  auto comps = density.flatten();
  std::vector<AtomicComponent> active;
  for (const auto& c : comps) {
    if (std::holds_alternative<DeltaMode>(c.shape))
      throw DeltaNotEvaluable("xi_quadrature: delta components have no quadrature form");
    if (c.coeff != 0.0) active.push_back(c);
  }
  XiQuadResult out;
  if (active.empty()) return out;

  const double n = static_cast<double>(active.size());
  for (const auto& c : active) {
    XiQuadOptions copt;
    copt.abs_tol = opt.abs_tol / (n * std::max(1.0, std::abs(c.coeff)));
    copt.max_evals = opt.max_evals / active.size();
    auto r = xi_quadrature_component(c, beta, t, copt);
    out.value += c.coeff * r.value;
    out.error += std::abs(c.coeff) * r.error;
    out.evals += r.evals;
  }
  if (out.error > opt.abs_tol)
    throw ToleranceNotMet("xi_quadrature: accumulated certified error exceeds tolerance");
  return out;
}

}  // namespace specbound::corr
