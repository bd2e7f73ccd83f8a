#pragma once

// A bath specification: spectral density, inverse temperature β (with
// β = +infinity encoding T = 0), and the system-side coupling prefactor λ².
// λ² lives here — never inside the spectral density — except in the
// truncation certifier, which absorbs it into Lorentzian weights and says
// so with an explicit flag (see truncation.hpp).

#include <cmath>
#include <limits>

#include "specbound/core.hpp"
#include "specbound/density.hpp"

namespace specbound {

inline constexpr double beta_infinity = std::numeric_limits<double>::infinity();

struct BathSpec {
  SpectralDensity density;
  double beta = 1.0;       // > 0, or +infinity for T = 0
  double lambda_sq = 1.0;  // ≥ 0

  void validate() const {
    if (!(beta > 0.0)) throw DomainError("BathSpec: beta must be > 0 (or +infinity for T = 0)");
    if (!(lambda_sq >= 0.0)) throw DomainError("BathSpec: lambda_sq must be ≥ 0");
  }

  [[nodiscard]] bool zero_temperature() const { return std::isinf(beta); }
};

}  // namespace specbound
