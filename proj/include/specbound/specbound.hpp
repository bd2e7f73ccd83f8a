#pragma once

// Umbrella header: the whole library in one include.
//
//   density.hpp         parametric spectral densities J(ω)
//   bath.hpp            (J, β, λ²) bath specification
//   correlation.hpp     ξ_J(t) with certified errors (closed forms + quadrature)
//   bounds.hpp          observable-error bounds under density variations
//   heom/*.hpp          Matsubara-truncation certificates and the benchmark bath
//   io/*.hpp            config files, CSV tables, reports, optional disk cache
//   math/*.hpp          quadrature, polygamma, numerically stable helpers
//
// The io/ headers additionally require the vendored single-header JSON
// library on the include path; everything else is self-contained.

#include "specbound/core.hpp"

#include "specbound/math/integrate.hpp"
#include "specbound/math/polygamma.hpp"
#include "specbound/math/stable.hpp"

#include "specbound/density.hpp"
#include "specbound/bath.hpp"

#include "specbound/correlation.hpp"

#include "specbound/bounds.hpp"
#include "specbound/bounds/variation.hpp"

#include "specbound/heom/truncation.hpp"
#include "specbound/heom/meier_tannor.hpp"

#include "specbound/io/cache.hpp"
#include "specbound/io/config.hpp"
#include "specbound/io/report.hpp"
#include "specbound/io/table.hpp"
