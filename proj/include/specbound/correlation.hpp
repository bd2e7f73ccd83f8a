#pragma once

// Bath correlation function
//
//   ξ(t) = (1/π) ∫₀^∞ J(ω) (coth(βω/2) cos ωt + i sin ωt) dω
//
// evaluated per flattened density component, dispatching between exact
// closed forms and certified quadrature of the defining integral.
//
// Closed forms exist for:
//   ohmic            any β (trigamma), including β = ∞
//   superohmic       any β (order-n polygamma), including β = ∞
//   subohmic         β = ∞ only (half-integer power law)
//   Lorentzian line  finite β only (Matsubara expansion, certified tail)
//   delta mode       any β (single oscillator, exact)
//
// Every sample carries a certified absolute error bound: quadrature panel
// estimates and Matsubara tails are controlled against `abs_tol`; exact
// closed forms add only a floating-point rounding allowance, which is
// reported but deliberately not tested against `abs_tol` (so a tolerance
// below machine precision does not spuriously fail on exact paths).

#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

#include "specbound/bath.hpp"
#include "specbound/core.hpp"
#include "specbound/correlation/closed_forms.hpp"
#include "specbound/correlation/lorentzian.hpp"
#include "specbound/correlation/quadrature.hpp"
#include "specbound/density.hpp"

namespace specbound {

enum class CorrelationMethod { Auto, ClosedForm, Quadrature };

// Which evaluation path(s) actually produced a sample.
enum class EvalPath { ClosedForm, Quadrature, Mixed };

inline const char* to_string(EvalPath p) {
  switch (p) {
    case EvalPath::ClosedForm: return "closed_form";
    case EvalPath::Quadrature: return "quadrature";
    case EvalPath::Mixed: return "mixed";
  }
  return "unknown";
}

struct CorrelationOptions {
  CorrelationMethod method = CorrelationMethod::Auto;
  double abs_tol = 1e-9;  // budget for quadrature error + Matsubara tails
  std::size_t max_evals = 1'000'000;
};

struct CorrelationSample {
  std::complex<double> value{};
  double error_bound = 0.0;  // certified absolute error (budgeted + rounding)
  EvalPath path = EvalPath::ClosedForm;
};

namespace corr_detail {

// Rounding allowance for an exact closed-form component value.
inline double rounding_allowance(const std::complex<double>& v) {
  return 1e-13 * (1.0 + std::abs(v));
}

inline bool closed_form_available(const AtomicComponent& c, double beta) {
  return std::visit(
      [&](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        (void)v;
        if constexpr (std::is_same_v<T, Subohmic>) {
          return std::isinf(beta);
        } else if constexpr (std::is_same_v<T, LorentzianTerm>) {
          return !std::isinf(beta);
        } else {
          return true;  // Ohmic, Superohmic, DeltaMode
        }
      },
      c.shape);
}

}  // namespace corr_detail

class CorrelationFn {
 public:
  explicit CorrelationFn(BathSpec bath, CorrelationOptions opt = {})
      : bath_(std::move(bath)), opt_(opt) {
    bath_.validate();
    if (!(opt_.abs_tol > 0.0)) throw ConfigError("CorrelationFn: abs_tol must be > 0");
    for (auto& c : bath_.density.flatten())
      if (c.coeff != 0.0) comps_.push_back(c);
  }

  [[nodiscard]] const BathSpec& bath() const { return bath_; }
  [[nodiscard]] const CorrelationOptions& options() const { return opt_; }

  [[nodiscard]] bool closed_form_available() const {
    for (const auto& c : comps_)
      if (!corr_detail::closed_form_available(c, bath_.beta)) return false;
    return true;
  }

  [[nodiscard]] CorrelationSample sample(double t) const {
    if (!(t >= 0.0)) throw DomainError("CorrelationFn: t must be ≥ 0");
    const double beta = bath_.beta;

    // Decide the path per component up front so the error budget can be
    // split over the components that contribute controllable error.
    std::vector<bool> use_quad(comps_.size(), false);
    std::size_t n_budgeted = 0;  // quadrature comps + Lorentzian closed forms
    std::size_t n_quad = 0;
    for (std::size_t i = 0; i < comps_.size(); ++i) {
      const auto& c = comps_[i];
      const bool cf = corr_detail::closed_form_available(c, beta);
      switch (opt_.method) {
        case CorrelationMethod::ClosedForm:
          if (!cf)
            throw DomainError(
                "CorrelationFn: no closed form for this component at this temperature");
          break;
        case CorrelationMethod::Quadrature:
          use_quad[i] = true;
          break;
        case CorrelationMethod::Auto:
          use_quad[i] = !cf;
          break;
      }
      if (use_quad[i]) {
        if (std::holds_alternative<DeltaMode>(c.shape))
          throw DeltaNotEvaluable("CorrelationFn: delta components have no quadrature form");
        ++n_budgeted;
        ++n_quad;
      } else if (std::holds_alternative<LorentzianTerm>(c.shape)) {
        ++n_budgeted;
      }
    }

    CorrelationSample out;
    bool any_cf = false;
    bool any_quad = false;
    double budgeted_error = 0.0;
    double rounding_error = 0.0;

    for (std::size_t i = 0; i < comps_.size(); ++i) {
      const auto& c = comps_[i];
      const double w = std::abs(c.coeff);
      const double tol_i =
          opt_.abs_tol / (static_cast<double>(std::max<std::size_t>(n_budgeted, 1)) *
                          std::max(1.0, w));
      std::complex<double> v;
      if (use_quad[i]) {
        any_quad = true;
        corr::XiQuadOptions qopt;
        qopt.abs_tol = tol_i;
        qopt.max_evals = opt_.max_evals / std::max<std::size_t>(n_quad, 1);
        auto r = corr::xi_quadrature_component(c, beta, t, qopt);
        v = r.value;
        budgeted_error += w * r.error;
      } else {
        any_cf = true;
        v = std::visit(
            [&](const auto& s) -> std::complex<double> {
              using T = std::decay_t<decltype(s)>;
              if constexpr (std::is_same_v<T, Ohmic>) {
                return s.prefactor * corr::xi_ohmic_closed(s.cutoff, beta, t);
              } else if constexpr (std::is_same_v<T, Superohmic>) {
                return s.prefactor * corr::xi_superohmic_closed(s.exponent, s.cutoff, beta, t);
              } else if constexpr (std::is_same_v<T, Subohmic>) {
                return s.prefactor * corr::xi_subohmic_zero_temp(s.cutoff, t);
              } else if constexpr (std::is_same_v<T, LorentzianTerm>) {
                auto r = corr::xi_lorentzian_auto(s.omega, s.gamma, beta, t, tol_i);
                budgeted_error += w * r.tail_bound;
                return s.p * r.value;
              } else {
                static_assert(std::is_same_v<T, DeltaMode>);
                return corr::xi_delta_mode(s.kappa, s.omega0, beta, t);
              }
            },
            c.shape);
        rounding_error += w * corr_detail::rounding_allowance(v);
      }
      out.value += c.coeff * v;
    }

    if (budgeted_error > opt_.abs_tol)
      throw ToleranceNotMet("CorrelationFn: certified error exceeds the requested tolerance");
    out.error_bound = budgeted_error + rounding_error;
    out.path = (any_cf && any_quad) ? EvalPath::Mixed
               : any_quad           ? EvalPath::Quadrature
                                    : EvalPath::ClosedForm;
    return out;
  }

  [[nodiscard]] std::complex<double> operator()(double t) const { return sample(t).value; }

 private:
  BathSpec bath_;
  CorrelationOptions opt_;
  std::vector<AtomicComponent> comps_;
};

}  // namespace specbound
