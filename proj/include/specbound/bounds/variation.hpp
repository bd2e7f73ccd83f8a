#pragma once

// A spectral-density variation ΔJ = J − J₀ induces a correlation variation
// Δξ(t) = ξ_J(t) − ξ_{J₀}(t) = ξ_{ΔJ}(t). This header provides
//
//   VariationSpec — the variation plus coupling / observable bookkeeping,
//   DeltaXiFn     — an evaluable Δξ with certified per-point errors and,
//                   where the component family admits one, certified decay
//                   certificates: ∫_T^∞ |Δξ| dt tail bounds and a constant
//                   C ≥ sup_t |Δξ(t)|.
//
// Tail certificates per atomic component (unit coefficient, J/π form g):
//
//   ωⁿ e^{−ω/Ω} coth (integer n ≥ 1), any β — integrating the cosine
//   transform twice by parts gives |Re ξ(t)| ≤ (|g′(0)| + ∫₀^∞|g″|)/t² for
//   every t > 0. With u(ω) = ω coth(βω/2) one has 0 ≤ u′ ≤ 1 and
//   0 ≤ u″ = (β/2)·2csch²(x)(x coth x − 1) ≤ β/3 (x = βω/2), u(ω) ≤ ω + 2/β,
//   which turns ∫|g″| into explicit Γ-function integrals. The exact
//   imaginary part obeys |Im ξ(t)| ≤ n!/t^{n+1}. Together |ξ(t)| ≤ K₂/t²
//   for t ≥ T₀ = max(1/Ω, β), hence ∫_T^∞ |ξ| ≤ K₂/T.
//
//   √ω e^{−ω/Ω} at β = ∞ — |ξ(t)| = Γ(3/2)Ω^{3/2}(1+Ω²t²)^{−3/4} ≤ (√π/2)t^{−3/2},
//   so ∫_T^∞ |ξ| ≤ √π/√T. At finite β the real part decays only like 1/√t,
//   which this library cannot certify as absolutely integrable: the
//   component is flagged integrability-undetermined.
//
//   Lorentzian line at finite β — the closed form is an e^{−Γt} resonance
//   plus a Matsubara series with rates ν_k = 2πk/β; both integrate to
//   explicit exponential tails (series gated as in the correlation tail
//   bound). At β = ∞ there is no Matsubara form: undetermined.
//
//   delta mode — |ξ| is periodic and never decays; a nonzero delta weight
//   makes the variation non-integrable.
//
// The sup certificate uses |coth(x)cos + i sin| ≤ coth(x) (x > 0), so for
// every pointwise-nonnegative atomic shape |ξ_c(t)| ≤ Re ξ_c(0) and
// C = Σ_c |coeff_c| (Re ξ_c(0) + eval error) ≥ sup_t |Δξ(t)| certified.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "specbound/core.hpp"
#include "specbound/correlation.hpp"
#include "specbound/density.hpp"

namespace specbound::bounds {

struct XiSample {
  std::complex<double> value{};
  double error = 0.0;  // certified absolute error of `value`
};

namespace vdetail {

inline double fact(int k) { return std::tgamma(static_cast<double>(k) + 1.0); }

// |ξ(t)| ≤ k2/t² for all t ≥ t0, for unit-prefactor J/π = ωⁿ e^{−ω/Ω}.
struct PowerDecay {
  double k2 = 0.0;
  double t0 = 0.0;
};

inline PowerDecay power_family_decay(int n, double omega_c, double beta) {
  const bool zero_temp = std::isinf(beta);
  const double u0 = zero_temp ? 0.0 : 2.0 / beta;       // u(0)
  const double upp = zero_temp ? 0.0 : beta / 3.0;      // sup u″
  double g1p0;                                          // |g′(0)|
  if (n == 1) {
    g1p0 = zero_temp ? 1.0 : u0 / omega_c;
  } else if (n == 2) {
    g1p0 = u0;
  } else {
    g1p0 = 0.0;
  }
  auto powc = [&](int k) { return std::pow(omega_c, k); };
  // ∫ w e^{−ω/Ω},   w = ω^{n−1} u(ω) ≤ ω^{n−1}(ω + u0)
  const double m0 = fact(n) * powc(n + 1) + u0 * fact(n - 1) * powc(n);
  // ∫ w′ e^{−ω/Ω},  w′ = (n−1)ω^{n−2}u + ω^{n−1}u′,  0 ≤ u′ ≤ 1
  double m1 = fact(n - 1) * powc(n);
  if (n >= 2) m1 += (n - 1) * (fact(n - 1) * powc(n) + u0 * fact(n - 2) * powc(n - 1));
  // ∫ w″ e^{−ω/Ω},  w″ = (n−1)(n−2)ω^{n−3}u + 2(n−1)ω^{n−2}u′ + ω^{n−1}u″
  double m2 = upp * fact(n - 1) * powc(n);
  if (n >= 2) m2 += 2.0 * (n - 1) * fact(n - 2) * powc(n - 1);
  if (n >= 3)
    m2 += static_cast<double>(n - 1) * (n - 2) *
          (fact(n - 2) * powc(n - 1) + u0 * fact(n - 3) * powc(n - 2));
  const double k_re = g1p0 + m2 + 2.0 * m1 / omega_c + m0 / (omega_c * omega_c);

  PowerDecay out;
  out.t0 = zero_temp ? 1.0 / omega_c : std::max(1.0 / omega_c, beta);
  const double k_im = fact(n) / std::pow(out.t0, n - 1);  // n!/t^{n+1} ≤ (n!/T₀^{n−1})/t²
  out.k2 = k_re + k_im;
  return out;
}

// Certified ∫_T^∞ of the unit-weight Lorentzian |ξ_L| at finite β.
inline double lorentzian_abs_tail(double center, double width, double beta, double T) {
  using Cx = std::complex<double>;
  const double pi = std::acos(-1.0);
  const double cp = std::abs(math::coth(Cx(beta * center / 2.0, beta * width / 2.0)));
  const double cm = std::abs(math::coth(Cx(beta * center / 2.0, -beta * width / 2.0)));
  const double a_res = (pi / 2.0) * (cp + cm + 2.0) / (8.0 * center * width);
  double tail = a_res * std::exp(-width * T) / width;

  const double b = center * center + width * width;
  const double nu1 = 2.0 * pi / beta;
  int K = std::max(1, static_cast<int>(std::ceil(2.0 * std::sqrt(b) / nu1)));
  for (;;) {
    math::KahanSum part;
    for (int k = 1; k <= K; ++k) {
      const double nu = nu1 * k;
      const double d = (b - nu * nu) * (b - nu * nu) + 4.0 * center * center * nu * nu;
      part.add(std::exp(-nu * T) / d);
    }
    const double nuK1 = nu1 * (K + 1);
    const double zeta4_tail = (K >= 1) ? 1.0 / (3.0 * std::pow(static_cast<double>(K), 3)) : 1.0824;
    double rem = (16.0 / 9.0) * std::pow(beta / (2.0 * pi), 4) * zeta4_tail;
    if (T > 0.0) {
      const double geom = (16.0 / 9.0) * std::exp(-nuK1 * T) /
                          (std::pow(nuK1, 4) * (-std::expm1(-nu1 * T)));
      rem = std::min(rem, geom);
    }
    if (rem <= 1e-6 * (part.value() + rem) || K >= (1 << 22)) {
      tail += (pi / beta) * (part.value() + rem);
      break;
    }
    K = 2 * K + 1;
  }
  return tail;
}

}  // namespace vdetail

// Evaluable Δξ(t) with certified pointwise errors and decay certificates.
class DeltaXiFn {
 public:
  // Caller-supplied Δξ with caller-certified properties (used by the
  // truncation certifier, whose Δξ is a real exponential series).
  struct Custom {
    std::function<XiSample(double)> eval;
    std::function<double(double)> abs_tail;              // certified ∫_T^∞|Δξ|; may be null
    std::function<double(double)> integrated_eval_error; // certified ∫₀^T (pointwise error); may be null
    bool is_real = false;
    bool undetermined = false;  // integrability cannot be decided
    double char_time = 1.0;
    double sup_bound = std::numeric_limits<double>::quiet_NaN();  // certified C; NaN → none
  };

  static DeltaXiFn from_evaluable(Custom cu) {
    if (!cu.eval) throw ConfigError("DeltaXiFn: custom evaluable requires an eval function");
    DeltaXiFn f;
    f.custom_ = std::move(cu);
    return f;
  }

  static DeltaXiFn from_density(const SpectralDensity& dj, double beta, double point_tol = 1e-10,
                                std::size_t max_evals = 1'000'000) {
    if (!(beta > 0.0)) throw DomainError("DeltaXiFn: beta must be > 0");
    if (!(point_tol > 0.0)) throw DomainError("DeltaXiFn: point_tol must be > 0");
    DeltaXiFn f;
    f.beta_ = beta;
    f.point_tol_ = point_tol;
    f.max_evals_ = max_evals;
    for (const auto& c : dj.flatten())
      if (c.coeff != 0.0) f.comps_.push_back(c);
    f.build_certificates();
    return f;
  }

  [[nodiscard]] XiSample eval(double t) const { return eval_tol(t, point_tol_); }

  // Same sample to a caller-chosen absolute tolerance (outer integrators pass
  // a time-decaying tolerance so their integrated budget stays finite).
  // Custom evaluables certify their own error and ignore the tolerance.
  [[nodiscard]] XiSample eval_tol(double t, double point_tol) const {
    if (custom_) return custom_->eval(t);
    if (!(t >= 0.0)) throw DomainError("DeltaXiFn: t must be ≥ 0");
    XiSample out;
    const std::size_t n = comps_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double w = std::abs(comps_[i].coeff);
      auto u = eval_unit(comps_[i], t, point_tol / (static_cast<double>(n) * w),
                         max_evals_ / n);
      out.value += comps_[i].coeff * u.value;
      out.error += w * u.error;
    }
    return out;
  }

  [[nodiscard]] bool is_zero() const { return !custom_ && comps_.empty(); }

  [[nodiscard]] bool has_delta() const {
    if (custom_) return false;
    for (const auto& c : comps_)
      if (std::holds_alternative<DeltaMode>(c.shape)) return true;
    return false;
  }

  [[nodiscard]] bool is_real() const { return custom_ ? custom_->is_real : comps_.empty(); }

  [[nodiscard]] bool tail_certified() const {
    if (custom_) return static_cast<bool>(custom_->abs_tail);
    if (has_delta()) return false;
    for (const auto& cert : certs_)
      if (!cert.tail) return false;
    return true;
  }

  // True when the variation decays too slowly (or too opaquely) for this
  // library to decide absolute integrability either way.
  [[nodiscard]] bool integrability_undetermined() const {
    if (custom_) return custom_->undetermined;
    if (has_delta()) return false;  // decided: not integrable
    for (const auto& cert : certs_)
      if (cert.undetermined) return true;
    return false;
  }

  [[nodiscard]] double char_time() const {
    if (custom_) return custom_->char_time;
    double ct = 0.0;
    for (const auto& cert : certs_) ct = std::max(ct, cert.char_time);
    return ct > 0.0 ? ct : 1.0;
  }

  // Certified ∫_T^∞ |Δξ(t)| dt.
  [[nodiscard]] double abs_tail_integral(double T) const {
    if (!(T > 0.0)) throw DomainError("DeltaXiFn: tail horizon must be > 0");
    if (custom_) {
      if (!custom_->abs_tail)
        throw NoTailCertificate("DeltaXiFn: this variation carries no decay certificate");
      return custom_->abs_tail(T);
    }
    if (!tail_certified())
      throw NoTailCertificate("DeltaXiFn: a component has no certified decay");
    double tail = 0.0;
    for (std::size_t i = 0; i < comps_.size(); ++i)
      tail += std::abs(comps_[i].coeff) * certs_[i].tail(T);
    return tail;
  }

  // Certified ∫₀^T (pointwise evaluation error) dt — the price of treating
  // eval() values as exact inside an outer quadrature.
  [[nodiscard]] double integrated_eval_error(double T) const {
    if (custom_) {
      if (!custom_->integrated_eval_error)
        throw NoTailCertificate("DeltaXiFn: custom evaluable lacks an integrated error bound");
      return custom_->integrated_eval_error(T);
    }
    return T * point_tol_ + integrated_rounding(T);
  }

  // Certified floating-point rounding budget 1e-13·∫₀^T (magnitude scale) dt
  // for closed-form values inside an outer integral. Each component's decay
  // certificate keeps the budget bounded for arbitrarily large horizons:
  // ∫₀^T |ξ_c| ≤ sup·τ + ∫_τ^∞ |ξ_c| with τ = min(T, 50·decay time).
  [[nodiscard]] double integrated_rounding(double T) const {
    if (!(T >= 0.0)) throw DomainError("DeltaXiFn: horizon must be ≥ 0");
    if (custom_) return 0.0;  // covered by the custom integrated error closure
    double budget = 0.0;
    for (std::size_t i = 0; i < comps_.size(); ++i) {
      const double w = std::abs(comps_[i].coeff);
      const auto& cert = certs_[i];
      if (cert.tail) {
        const double tau = std::min(T, 50.0 * cert.char_time);
        budget += w * (cert.sup_unit * tau + (tau > 0.0 ? cert.tail(tau) : 0.0));
      } else {
        budget += w * cert.sup_unit * T;
      }
    }
    return 1e-13 * budget;
  }

  [[nodiscard]] bool has_certified_sup() const {
    if (custom_) return !std::isnan(custom_->sup_bound);
    return true;
  }

  // Certified C ≥ sup_t |Δξ(t)|.
  [[nodiscard]] double certified_sup() const {
    if (custom_) {
      if (std::isnan(custom_->sup_bound))
        throw NoTailCertificate("DeltaXiFn: custom evaluable carries no sup certificate");
      return custom_->sup_bound;
    }
    double c = 0.0;
    for (std::size_t i = 0; i < comps_.size(); ++i)
      c += std::abs(comps_[i].coeff) * certs_[i].sup_unit;
    return c;
  }

  [[nodiscard]] bool is_custom() const { return custom_.has_value(); }

  [[nodiscard]] double point_tol() const { return custom_ ? 0.0 : point_tol_; }

  // Same variation evaluated to a different pointwise tolerance. Decay and
  // sup certificates are kept as-is (they remain valid upper bounds).
  [[nodiscard]] DeltaXiFn with_point_tol(double point_tol) const {
    if (custom_) return *this;
    if (!(point_tol > 0.0)) throw DomainError("DeltaXiFn: point_tol must be > 0");
    DeltaXiFn f = *this;
    f.point_tol_ = point_tol;
    return f;
  }

 private:
  struct Cert {
    std::function<double(double)> tail;  // unit-coefficient ∫_T^∞|ξ_c|; null → none
    bool undetermined = false;
    double char_time = 1.0;
    double sup_unit = 0.0;  // certified Re ξ_c(0) + error, unit coefficient
  };

  // ξ of one atomic shape with unit coefficient: closed form if available
  // at this β, defining-integral quadrature otherwise.
  [[nodiscard]] XiSample eval_unit(const AtomicComponent& c, double t, double tol_unit,
                                   std::size_t evals) const {
    XiSample s;
    if (corr_detail::closed_form_available(c, beta_)) {
      s.value = std::visit(
          [&](const auto& v) -> std::complex<double> {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Ohmic>) {
              return v.prefactor * corr::xi_ohmic_closed(v.cutoff, beta_, t);
            } else if constexpr (std::is_same_v<T, Superohmic>) {
              return v.prefactor * corr::xi_superohmic_closed(v.exponent, v.cutoff, beta_, t);
            } else if constexpr (std::is_same_v<T, Subohmic>) {
              return v.prefactor * corr::xi_subohmic_zero_temp(v.cutoff, t);
            } else if constexpr (std::is_same_v<T, LorentzianTerm>) {
              auto r = corr::xi_lorentzian_auto(v.omega, v.gamma, beta_, t, tol_unit);
              s.error += r.tail_bound;
              return v.p * r.value;
            } else {
              static_assert(std::is_same_v<T, DeltaMode>);
              return corr::xi_delta_mode(v.kappa, v.omega0, beta_, t);
            }
          },
          c.shape);
      s.error += 1e-13 * (1.0 + std::abs(s.value));
    } else {
      corr::XiQuadOptions qopt;
      qopt.abs_tol = tol_unit;
      qopt.max_evals = evals;
      auto r = corr::xi_quadrature_component(c, beta_, t, qopt);
      s.value = r.value;
      s.error = r.error;
    }
    return s;
  }

  void build_certificates() {
    certs_.clear();
    certs_.reserve(comps_.size());
    const double nu1 = std::isinf(beta_) ? 0.0 : 2.0 * std::acos(-1.0) / beta_;
    for (const auto& c : comps_) {
      Cert cert;
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Ohmic> || std::is_same_v<T, Superohmic>) {
              const int n = [&] {
                if constexpr (std::is_same_v<T, Superohmic>) return v.exponent;
                return 1;
              }();
              const auto decay = vdetail::power_family_decay(n, v.cutoff, beta_);
              const double pre = v.prefactor;
              const double sup = sup_of(c);
              cert.tail = [decay, pre, sup](double T) {
                double tail = pre * decay.k2 / std::max(T, decay.t0);
                if (T < decay.t0) tail += (decay.t0 - T) * sup;
                return tail;
              };
              cert.char_time = decay.t0;
              cert.sup_unit = sup;
            } else if constexpr (std::is_same_v<T, Subohmic>) {
              cert.sup_unit = sup_of(c);
              if (std::isinf(beta_)) {
                const double pre = v.prefactor;
                cert.tail = [pre](double T) {
                  return pre * std::sqrt(std::acos(-1.0)) / std::sqrt(T);
                };
                cert.char_time = 1.0 / v.cutoff;
              } else {
                cert.undetermined = true;  // 1/√t real-part decay: not certifiable
                cert.char_time = std::max(1.0 / v.cutoff, beta_);
              }
            } else if constexpr (std::is_same_v<T, LorentzianTerm>) {
              cert.sup_unit = sup_of(c);
              if (!std::isinf(beta_)) {
                const double o = v.omega, g = v.gamma, b = beta_, p = std::abs(v.p);
                cert.tail = [o, g, b, p](double T) {
                  return p * vdetail::lorentzian_abs_tail(o, g, b, T);
                };
                cert.char_time = 1.0 / std::min(g, nu1);
              } else {
                cert.undetermined = true;  // no Matsubara form at T = 0
                cert.char_time = 1.0 / v.gamma;
              }
            } else {
              static_assert(std::is_same_v<T, DeltaMode>);
              cert.sup_unit = sup_of(c);  // (|κ|/π)·coth(βω₀/2): periodic sup
              cert.char_time = 2.0 * std::acos(-1.0) / v.omega0;
            }
          },
          c.shape);
      certs_.push_back(std::move(cert));
    }
  }

  // Certified Re ξ_c(0) + error for the unit-coefficient shape, which
  // dominates |ξ_c(t)| for every t (delta mode: |κ| replaces κ).
  [[nodiscard]] double sup_of(const AtomicComponent& c) const {
    if (const auto* d = std::get_if<DeltaMode>(&c.shape)) {
      const double th = std::isinf(beta_) ? 1.0 : math::coth(beta_ * d->omega0 / 2.0);
      return std::abs(d->kappa) / std::acos(-1.0) * th;
    }
    auto s = eval_unit(c, 0.0, point_tol_, max_evals_);
    return std::abs(s.value.real()) + s.error;
  }

  std::optional<Custom> custom_;
  double beta_ = 1.0;
  double point_tol_ = 1e-10;
  std::size_t max_evals_ = 1'000'000;
  std::vector<AtomicComponent> comps_;
  std::vector<Cert> certs_;

  DeltaXiFn() = default;
};

// A variation of the bath plus the bookkeeping the bounds need: system
// coupling λ², the observable norm prefactor, and whether λ² has already
// been absorbed into the density weights (then the bound exponent uses 1).
struct VariationSpec {
  std::optional<SpectralDensity> delta_j;  // ΔJ-form source
  double beta = 1.0;
  std::shared_ptr<const DeltaXiFn> delta_xi;  // Δξ-form source (preferred if set)
  double lambda_sq = 1.0;
  bool coupling_absorbed = false;
  double observable_norm = 1.0;

  void validate() const {
    if (!delta_j && !delta_xi)
      throw ConfigError("VariationSpec: needs a density variation or a correlation variation");
    if (!(beta > 0.0)) throw ConfigError("VariationSpec: beta must be > 0");
    if (!(lambda_sq >= 0.0)) throw ConfigError("VariationSpec: lambda_sq must be ≥ 0");
    if (!(observable_norm > 0.0)) throw ConfigError("VariationSpec: observable_norm must be > 0");
  }

  [[nodiscard]] double effective_lambda_sq() const { return coupling_absorbed ? 1.0 : lambda_sq; }

  // The Δξ evaluable; a directly supplied Δξ wins (one fewer nested quadrature).
  [[nodiscard]] DeltaXiFn resolve(double point_tol, std::size_t max_evals = 1'000'000) const {
    validate();
    if (delta_xi) return *delta_xi;
    return DeltaXiFn::from_density(*delta_j, beta, point_tol, max_evals);
  }
};

}  // namespace specbound::bounds
