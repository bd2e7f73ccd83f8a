#pragma once

// Adaptive panel integration built on the 15-point Kronrod extension of
// 7-point Gauss. Every driver returns the integral together with an error
// estimate (sum of per-panel |K15 − G7| discrepancies) and the number of
// integrand evaluations, so callers can do certified-arithmetic bookkeeping
// (errors are added to results, never ignored). Plain |K15 − G7| is used
// unsharpened: it over- rather than under-states the panel error compared
// with the rescaled estimators common in library code.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <set>
#include <vector>

#include "specbound/core.hpp"

namespace specbound::math {

// Nonnegative abscissae of the 15-point Kronrod rule on [−1, 1], ascending;
// even indices (0, 2, 4, 6) are the embedded 7-point Gauss nodes.
inline constexpr std::array<double, 8> gk15_nodes = {
    0.000000000000000000000000000000000,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
};
inline constexpr std::array<double, 8> gk15_weights = {
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
};
inline constexpr std::array<double, 4> g7_weights = {
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
};

inline double norm_of(double v) { return std::abs(v); }
inline double norm_of(const std::complex<double>& v) { return std::abs(v); }

template <class Value>
struct Panel {
  double a = 0.0;
  double b = 0.0;
  Value integral{};
  double error = 0.0;
};

// One 15-point panel on [a, b]; 15 integrand evaluations.
template <class Value, class F>
Panel<Value> gk15_panel(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const Value fc = f(c);
  Value k15 = gk15_weights[0] * fc;
  Value g7 = g7_weights[0] * fc;
  for (std::size_t i = 1; i < 8; ++i) {
    const double off = h * gk15_nodes[i];
    const Value fp = f(c + off);
    const Value fm = f(c - off);
    const Value pair = fp + fm;
    k15 += gk15_weights[i] * pair;
    if (i % 2 == 0) g7 += g7_weights[i / 2] * pair;
  }
  k15 *= h;
  g7 *= h;
  return Panel<Value>{a, b, k15, norm_of(Value(k15 - g7))};
}

struct IntegrateOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  std::size_t max_evals = 1'000'000;
  const std::atomic<bool>* cancel = nullptr;  // cooperative cancellation
};

// Process-wide cooperative cancellation flag. Long-running quadratures poll
// it between refinement steps, so a front end (e.g. a signal handler) can
// abort cleanly without plumbing an atomic through every call site.
inline std::atomic<bool>& global_cancel_flag() {
  static std::atomic<bool> flag{false};
  return flag;
}

template <class Value>
struct IntegrateResult {
  Value value{};
  double error = 0.0;
  std::size_t evals = 0;
  bool converged = false;
};

namespace detail {

// Deterministic worst-first ordering: by error, then by interval start.
template <class Value>
struct PanelWorse {
  bool operator()(const Panel<Value>& x, const Panel<Value>& y) const {
    if (x.error != y.error) return x.error > y.error;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  }
};

}  // namespace detail

// Adaptive refinement starting from already-computed panels: bisects the
// worst panel until the summed error estimate drops below
// max(abs_tol, rel_tol·|value|) or the evaluation budget is exhausted
// (converged=false in that case).
template <class Value, class F>
IntegrateResult<Value> refine_panels(F&& f, const std::vector<Panel<Value>>& initial,
                                     const IntegrateOptions& opt) {
  IntegrateResult<Value> out;
  if (initial.empty()) {
    out.converged = true;
    return out;
  }
  std::multiset<Panel<Value>, detail::PanelWorse<Value>> panels(initial.begin(), initial.end());

  auto totals = [&panels]() {
    Value v{};
    double e = 0.0;
    for (const auto& p : panels) {
      v += p.integral;
      e += p.error;
    }
    return std::pair<Value, double>(v, e);
  };

  for (;;) {
    auto [value, error] = totals();
    out.value = value;
    out.error = error;
    if ((opt.cancel != nullptr && opt.cancel->load(std::memory_order_relaxed)) ||
        global_cancel_flag().load(std::memory_order_relaxed))
      throw ToleranceNotMet("integration cancelled");
    if (error <= std::max(opt.abs_tol, opt.rel_tol * norm_of(value))) {
      out.converged = true;
      break;
    }
    if (out.evals + 30 > opt.max_evals) break;  // budget exhausted
    auto worst = panels.begin();
    const double a = worst->a, b = worst->b;
    const double mid = 0.5 * (a + b);
    if (!(a < mid && mid < b)) {  // interval no longer splittable in doubles
      out.converged = error <= std::max(opt.abs_tol, opt.rel_tol * norm_of(value));
      break;
    }
    panels.erase(worst);
    panels.insert(gk15_panel<Value>(f, a, mid));
    panels.insert(gk15_panel<Value>(f, mid, b));
    out.evals += 30;
  }

  // Deterministic final summation in left-to-right interval order.
  std::vector<Panel<Value>> ordered(panels.begin(), panels.end());
  std::sort(ordered.begin(), ordered.end(),
            [](const Panel<Value>& x, const Panel<Value>& y) { return x.a < y.a; });
  Value v{};
  double e = 0.0;
  for (const auto& p : ordered) {
    v += p.integral;
    e += p.error;
  }
  out.value = v;
  out.error = e;
  return out;
}

// Adaptive integration over an initial partition given by `breaks`
// (strictly ascending, at least two entries).
template <class Value, class F>
IntegrateResult<Value> integrate_partition(F&& f, const std::vector<double>& breaks,
                                           const IntegrateOptions& opt) {
  IntegrateResult<Value> out;
  if (breaks.size() < 2) {
    out.converged = true;
    return out;
  }
  std::vector<Panel<Value>> initial;
  initial.reserve(breaks.size() - 1);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i] < breaks[i + 1]))
      throw DomainError("integrate_partition: breakpoints must be strictly increasing");
    initial.push_back(gk15_panel<Value>(f, breaks[i], breaks[i + 1]));
  }
  auto r = refine_panels<Value>(f, initial, opt);
  r.evals += 15 * initial.size();
  return r;
}

template <class Value, class F>
IntegrateResult<Value> integrate_adaptive(F&& f, double a, double b, const IntegrateOptions& opt) {
  return integrate_partition<Value>(std::forward<F>(f), std::vector<double>{a, b}, opt);
}

// ---- |f| integration with sign-change splitting -------------------------

struct AbsIntegralResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evals = 0;
  bool converged = false;
  std::vector<double> crossings;
};

// Locates sign changes of a continuous real f on [a, b] by uniform scan
// (scan_points intervals) and bisection; the returned points partition
// [a, b] into sign-constant panels so that |f| is smooth per panel.
template <class F>
std::vector<double> locate_sign_changes(F&& f, double a, double b, int scan_points) {
  std::vector<double> crossings;
  if (!(b > a) || scan_points < 2) return crossings;
  const double h = (b - a) / scan_points;
  double x_prev = a;
  double f_prev = f(a);
  for (int i = 1; i <= scan_points; ++i) {
    const double x = (i == scan_points) ? b : a + i * h;
    const double fx = f(x);
    if ((f_prev < 0.0 && fx > 0.0) || (f_prev > 0.0 && fx < 0.0)) {
      double lo = x_prev, hi = x, flo = f_prev;
      for (int it = 0; it < 60 && hi - lo > 1e-14 * (1.0 + std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((flo < 0.0) == (fm < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      crossings.push_back(0.5 * (lo + hi));
    }
    x_prev = x;
    f_prev = fx;
  }
  return crossings;
}

// ∫_a^b w(s)·|f(s)| ds with w ≥ 0 smooth. Splits at detected sign changes
// of f so the integrand is smooth per panel; the scan cost is included in
// `evals`.
template <class F, class W>
AbsIntegralResult integrate_abs_weighted(F&& f, W&& w, double a, double b, int scan_points,
                                         const IntegrateOptions& opt) {
  AbsIntegralResult out;
  if (!(b > a)) {
    out.converged = true;
    return out;
  }
  out.crossings = locate_sign_changes(f, a, b, scan_points);
  out.evals += static_cast<std::size_t>(scan_points) + 1 +
               60 * out.crossings.size();  // scan + bisection upper estimate
  std::vector<double> breaks;
  breaks.push_back(a);
  for (double c : out.crossings)
    if (c > breaks.back() && c < b) breaks.push_back(c);
  breaks.push_back(b);
  auto g = [&](double s) { return std::abs(f(s)) * w(s); };
  auto r = integrate_partition<double>(g, breaks, opt);
  out.value = r.value;
  out.error = r.error;
  out.evals += r.evals;
  out.converged = r.converged;
  return out;
}

template <class F>
AbsIntegralResult integrate_abs(F&& f, double a, double b, int scan_points,
                                const IntegrateOptions& opt) {
  return integrate_abs_weighted(std::forward<F>(f), [](double) { return 1.0; }, a, b, scan_points,
                                opt);
}

}  // namespace specbound::math
