#pragma once

// Parametric spectral densities J(ω) of a bosonic bath, with pointwise
// evaluation and closed algebraic operations (scaling, sums, differences)
// so that a variation ΔJ = J − J₀ is itself a spectral density.
//
// Variants and conventions (evaluation domain ω ≥ 0):
//
//   Ohmic         J(ω) = prefactor · π · ω · e^{−ω/cutoff}
//   Superohmic    J(ω) = prefactor · π · ωⁿ · e^{−ω/cutoff},   n ≥ 2
//   Subohmic      J(ω) = prefactor · π · √ω · e^{−ω/cutoff}
//   LorentzianSum J(ω) = Σᵢ pᵢ L(ω; Ωᵢ, Γᵢ),
//                 L(ω;Ω,Γ) = (π/2)·ω / (((ω+Ω)²+Γ²)·((ω−Ω)²+Γ²))
//   DeltaMode     J(ω) = κ·δ(ω − ω₀)    (symbolic — not pointwise evaluable)
//   Combination   J(ω) = Σⱼ cⱼ Jⱼ(ω)
//
// The antisymmetrized-Lorentzian prefactor π/2 is part of L's definition
// here; all correlation closed forms in this library are consistent with it
// and that consistency is pinned by quadrature oracle tests. Weights pᵢ, κ
// and combination coefficients may be negative (variations need signed
// densities); shape parameters (cutoffs, centers, widths) must be positive.

#include <cmath>
#include <utility>
#include <variant>
#include <vector>

#include "specbound/core.hpp"

namespace specbound {

struct Ohmic {
  double prefactor = 1.0;
  double cutoff = 1.0;
};

struct Superohmic {
  int exponent = 2;
  double prefactor = 1.0;
  double cutoff = 1.0;
};

struct Subohmic {
  double prefactor = 1.0;
  double cutoff = 1.0;
};

struct LorentzianTerm {
  double p = 1.0;      // signed weight
  double omega = 1.0;  // center Ω > 0
  double gamma = 1.0;  // width Γ > 0
};

struct LorentzianSum {
  std::vector<LorentzianTerm> terms;
};

struct DeltaMode {
  double kappa = 1.0;   // signed weight
  double omega0 = 1.0;  // location ω₀ > 0
};

class SpectralDensity;

struct CombinationPart;  // {coeff, density}

struct Combination {
  std::vector<CombinationPart> parts;
};

// A single non-combination component together with the product of all
// combination coefficients above it. LorentzianSum flattens term-wise with
// shape {p=1, Ω, Γ} and the signed weight folded into coeff.
struct AtomicComponent {
  double coeff = 1.0;
  std::variant<Ohmic, Superohmic, Subohmic, LorentzianTerm, DeltaMode> shape;
};

// The single antisymmetrized Lorentzian L(ω;Ω,Γ) including its π/2 prefactor.
inline double lorentzian_line(double omega, double center, double width) {
  const double sp = (omega + center) * (omega + center) + width * width;
  const double sm = (omega - center) * (omega - center) + width * width;
  return (std::acos(-1.0) / 2.0) * omega / (sp * sm);
}

class SpectralDensity {
 public:
  using Node = std::variant<Ohmic, Superohmic, Subohmic, LorentzianSum, DeltaMode, Combination>;

  SpectralDensity() : node_(Ohmic{1.0, 1.0}) {}
  SpectralDensity(Ohmic v) : node_(std::move(v)) { validate(); }
  SpectralDensity(Superohmic v) : node_(std::move(v)) { validate(); }
  SpectralDensity(Subohmic v) : node_(std::move(v)) { validate(); }
  SpectralDensity(LorentzianSum v) : node_(std::move(v)) { validate(); }
  SpectralDensity(DeltaMode v) : node_(std::move(v)) { validate(); }
  SpectralDensity(Combination v) : node_(std::move(v)) { validate(); }

  [[nodiscard]] const Node& node() const { return node_; }

  [[nodiscard]] bool has_delta() const {
    bool found = false;
    visit_atomic([&](const AtomicComponent& c) {
      if (std::holds_alternative<DeltaMode>(c.shape) && c.coeff != 0.0) found = true;
    });
    return found;
  }

  // Pointwise J(ω). Throws DomainError for ω < 0 and DeltaNotEvaluable if a
  // delta component with nonzero weight is present.
  [[nodiscard]] double operator()(double omega) const {
    if (!(omega >= 0.0)) throw DomainError("SpectralDensity: ω must be ≥ 0");
    double total = 0.0;
    visit_atomic([&](const AtomicComponent& c) {
      if (c.coeff == 0.0) return;
      total += c.coeff * eval_shape(c.shape, omega);
    });
    return total;
  }

  // Flattened view: the density as a list of scaled atomic components.
  // Nested combinations distribute; result evaluates identically pointwise.
  [[nodiscard]] std::vector<AtomicComponent> flatten() const {
    std::vector<AtomicComponent> out;
    visit_atomic([&](const AtomicComponent& c) { out.push_back(c); });
    return out;
  }

  [[nodiscard]] SpectralDensity scaled(double a) const;

  friend SpectralDensity operator+(const SpectralDensity& x, const SpectralDensity& y);

  // ΔJ = J − J₀ as a Combination; evaluates to the pointwise difference.
  static SpectralDensity difference(const SpectralDensity& j, const SpectralDensity& j0);

  static SpectralDensity zero();

 private:
  template <class Fn>
  void visit_atomic(Fn&& fn, double coeff = 1.0) const {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Combination>) {
            for (const auto& part : v.parts) part_visit(part, fn, coeff);
          } else if constexpr (std::is_same_v<T, LorentzianSum>) {
            for (const auto& term : v.terms)
              fn(AtomicComponent{coeff * term.p, LorentzianTerm{1.0, term.omega, term.gamma}});
          } else {
            fn(AtomicComponent{coeff, v});
          }
        },
        node_);
  }

  template <class Fn>
  static void part_visit(const CombinationPart& part, Fn&& fn, double coeff);

  static double eval_shape(const std::variant<Ohmic, Superohmic, Subohmic, LorentzianTerm, DeltaMode>& shape,
                           double omega) {
    const double pi = std::acos(-1.0);
    return std::visit(
        [&](const auto& v) -> double {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Ohmic>) {
            return v.prefactor * pi * omega * std::exp(-omega / v.cutoff);
          } else if constexpr (std::is_same_v<T, Superohmic>) {
            return v.prefactor * pi * std::pow(omega, v.exponent) * std::exp(-omega / v.cutoff);
          } else if constexpr (std::is_same_v<T, Subohmic>) {
            return v.prefactor * pi * std::sqrt(omega) * std::exp(-omega / v.cutoff);
          } else if constexpr (std::is_same_v<T, LorentzianTerm>) {
            return v.p * lorentzian_line(omega, v.omega, v.gamma);
          } else {
            static_assert(std::is_same_v<T, DeltaMode>);
            throw DeltaNotEvaluable("SpectralDensity: delta component is not pointwise evaluable");
          }
        },
        shape);
  }

  void validate() const {
    std::visit(
        [](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Ohmic> || std::is_same_v<T, Subohmic>) {
            if (!(v.prefactor > 0.0)) throw DomainError("SpectralDensity: prefactor must be > 0");
            if (!(v.cutoff > 0.0)) throw DomainError("SpectralDensity: cutoff must be > 0");
          } else if constexpr (std::is_same_v<T, Superohmic>) {
            if (v.exponent < 2) throw DomainError("SpectralDensity: superohmic exponent must be ≥ 2");
            if (!(v.prefactor > 0.0)) throw DomainError("SpectralDensity: prefactor must be > 0");
            if (!(v.cutoff > 0.0)) throw DomainError("SpectralDensity: cutoff must be > 0");
          } else if constexpr (std::is_same_v<T, LorentzianSum>) {
            for (const auto& t : v.terms) {
              if (!(t.omega > 0.0)) throw DomainError("SpectralDensity: Lorentzian center must be > 0");
              if (!(t.gamma > 0.0)) throw DomainError("SpectralDensity: Lorentzian width must be > 0");
            }
          } else if constexpr (std::is_same_v<T, DeltaMode>) {
            if (!(v.omega0 > 0.0)) throw DomainError("SpectralDensity: delta location must be > 0");
          }
          // Combination parts are validated when each part is constructed.
        },
        node_);
  }

  Node node_;
};

struct CombinationPart {
  double coeff = 1.0;
  SpectralDensity density;
};

template <class Fn>
void SpectralDensity::part_visit(const CombinationPart& part, Fn&& fn, double coeff) {
  part.density.visit_atomic(fn, coeff * part.coeff);
}

inline SpectralDensity SpectralDensity::scaled(double a) const {
  Combination comb;
  comb.parts.push_back({a, *this});
  return SpectralDensity(std::move(comb));
}

inline SpectralDensity operator+(const SpectralDensity& x, const SpectralDensity& y) {
  Combination comb;
  comb.parts.push_back({1.0, x});
  comb.parts.push_back({1.0, y});
  return SpectralDensity(std::move(comb));
}

inline SpectralDensity SpectralDensity::difference(const SpectralDensity& j,
                                                   const SpectralDensity& j0) {
  Combination comb;
  comb.parts.push_back({1.0, j});
  comb.parts.push_back({-1.0, j0});
  return SpectralDensity(std::move(comb));
}

inline SpectralDensity SpectralDensity::zero() {
  Combination comb;
  return SpectralDensity(std::move(comb));
}

}  // namespace specbound
