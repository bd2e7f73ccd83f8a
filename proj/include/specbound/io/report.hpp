#pragma once

// Structured-text (JSON) rendering of bound reports and truncation
// certificates, plus the human-readable replica of the benchmark table.
// Non-finite optional fields are omitted rather than serialized as null.

#include <cmath>
#include <cstdio>
#include <string>

#include <json.hpp>

#include "specbound/bounds.hpp"
#include "specbound/core.hpp"
#include "specbound/heom/meier_tannor.hpp"
#include "specbound/heom/truncation.hpp"
#include "specbound/io/config.hpp"

namespace specbound::io {

inline ojson to_json(const bounds::ConditionStatus& s) {
  ojson out;
  out["state"] = bounds::to_string(s.state);
  if (std::isfinite(s.c)) out["c"] = s.c;
  out["evals"] = s.evals;
  return out;
}

inline ojson to_json(const bounds::GammaEta& g) {
  ojson out;
  out["gamma"] = g.gamma;
  out["eta"] = g.eta;
  out["gamma_truncated"] = g.gamma_truncated;
  out["eta_truncated"] = g.eta_truncated;
  out["tail_bound"] = g.tail_bound;
  out["horizon"] = g.horizon;
  out["certified"] = g.certified;
  out["evals"] = g.evals;
  return out;
}

inline ojson to_json(const bounds::BoundReport& r) {
  ojson out;
  out["kind"] = bounds::to_string(r.kind);
  out["condition"] = to_json(r.condition);
  out["certified"] = r.certified;
  out["tolerance"] = r.tolerance;
  out["evals"] = r.evals;
  if (std::isfinite(r.weak_C)) out["weak_C"] = r.weak_C;
  if (std::isfinite(r.gamma)) out["gamma"] = r.gamma;
  if (std::isfinite(r.eta)) out["eta"] = r.eta;
  if (std::isfinite(r.horizon)) out["horizon"] = r.horizon;
  if (std::isfinite(r.c_direct)) out["c_direct"] = r.c_direct;
  if (!r.curve.empty()) {
    out["t_max"] = r.curve.back().first;
    out["bound_at_t_max"] = r.curve.back().second;
  }
  return out;
}

inline ojson to_json(const heom::TruncationCert& c) {
  ojson bath = ojson::array();
  for (const auto& t : c.bath) {
    ojson e;
    e["p"] = t.p;
    e["omega"] = t.omega;
    e["gamma"] = t.gamma;
    bath.push_back(std::move(e));
  }
  ojson out;
  out["bath"] = std::move(bath);
  out["beta"] = c.beta;
  out["n"] = c.N;
  out["t_target"] = c.t_target;
  out["coupling_absorbed"] = c.coupling_absorbed;
  out["gamma_analytic"] = c.gamma_analytic;
  out["gamma_numeric"] = c.gamma_numeric;
  out["rel_bound_analytic"] = c.rel_bound_analytic;
  out["rel_bound_numeric"] = c.rel_bound_numeric;
  out["quad_tol"] = c.quad_tol;
  out["matsubara_terms"] = c.matsubara_terms;
  out["numeric_horizon"] = c.numeric_horizon;
  out["numeric_tail_bound"] = c.numeric_tail_bound;
  return out;
}

inline ojson to_json(const heom::Table2Row& r) {
  ojson out;
  out["beta"] = r.beta;
  out["n"] = r.N;
  out["rel_analytic_pct"] = r.rel_analytic_pct;
  out["rel_numeric_pct"] = r.rel_numeric_pct;
  out["min_n_analytic"] = r.min_n_analytic;
  out["min_n_numeric"] = r.min_n_numeric;
  out["ref_analytic_pct"] = r.ref_analytic_pct;
  out["ref_numeric_pct"] = r.ref_numeric_pct;
  out["ref_min_n_analytic"] = r.ref_min_n_analytic;
  out["ref_min_n_numeric"] = r.ref_min_n_numeric;
  out["pass_analytic"] = r.pass_analytic;
  out["pass_numeric"] = r.pass_numeric;
  out["pass_min_analytic"] = r.pass_min_analytic;
  out["pass_min_numeric"] = r.pass_min_numeric;
  out["pass"] = r.pass();
  return out;
}

inline ojson to_json(const heom::Table2Result& t) {
  ojson rows = ojson::array();
  for (const auto& r : t.rows) rows.push_back(to_json(r));
  ojson out;
  out["t_max"] = t.t_max;
  out["error_target"] = t.error_target;
  out["rows"] = std::move(rows);
  out["all_pass"] = t.all_pass;
  return out;
}

// Human-readable replica of the benchmark table with per-row verdicts.
inline std::string table2_text(const heom::Table2Result& t) {
  std::string out;
  char line[192];
  std::snprintf(line, sizeof line,
                "truncation benchmark (t_max = %g, error target = %g%%)\n", t.t_max,
                100.0 * t.error_target);
  out += line;
  std::snprintf(line, sizeof line, "%8s %4s  %22s  %22s  %14s  %14s  %s\n", "beta", "N",
                "rel analytic (ref)", "rel numeric (ref)", "minN an (ref)", "minN num (ref)",
                "verdict");
  out += line;
  for (const auto& r : t.rows) {
    char an[32], nu[32], ma[24], mn[24];
    std::snprintf(an, sizeof an, "%.4f%% (%.2f%%)", r.rel_analytic_pct, r.ref_analytic_pct);
    std::snprintf(nu, sizeof nu, "%.4f%% (%.2f%%)", r.rel_numeric_pct, r.ref_numeric_pct);
    std::snprintf(ma, sizeof ma, "%d (%d)", r.min_n_analytic, r.ref_min_n_analytic);
    std::snprintf(mn, sizeof mn, "%d (%d)", r.min_n_numeric, r.ref_min_n_numeric);
    std::snprintf(line, sizeof line, "%8.2f %4d  %22s  %22s  %14s  %14s  %s\n", r.beta, r.N, an,
                  nu, ma, mn, r.pass() ? "PASS" : "FAIL");
    out += line;
  }
  out += t.all_pass ? "all rows PASS\n" : "some rows FAIL\n";
  return out;
}

}  // namespace specbound::io
