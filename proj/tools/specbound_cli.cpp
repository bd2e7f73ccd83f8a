// Command-line front end: evaluate spectral densities and bath correlation
// functions, compute certified observable-error bound curves for
// spectral-density variations, and issue Matsubara-truncation certificates.
//
// Subcommands
//   eval-density      J(ω) over the configured grid           → CSV
//   eval-correlation  ξ(t) with a certified error column      → CSV
//   bound             B(t) curves per bound kind + best       → CSV + JSON report
//   heom-cert         truncation certificate (or --table2)    → JSON / text
//   reproduce-table2  alias for heom-cert --table2
//
// Output streams: the primary table goes to --out when given, otherwise to
// stdout. The `bound` JSON report goes to stdout when the table was written
// to a file, otherwise to stderr, so each stream carries a single format.
//
// Exit codes: 0 success · 2 configuration/domain error · 3 tolerance or
// certification failure · 4 evaluation/search budget exceeded.

#include <algorithm>
#include <csignal>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "specbound/specbound.hpp"

namespace sb = specbound;
using sb::io::ojson;
using sb::io::RunConfig;

namespace {

struct FlagOverrides {
  std::string config_path;
  std::string out;
  double tol = -1.0;      // < 0: keep the config value
  double horizon = -1.0;  // < 0: keep the config value
  std::string method;
  std::string kind;
  int threads = 0;
};

void add_common_flags(CLI::App* cmd, FlagOverrides& f, bool config_required) {
  auto* c = cmd->add_option("--config", f.config_path, "JSON configuration file");
  if (config_required) c->required();
  cmd->add_option("--out", f.out, "write the primary output to this path");
  cmd->add_option("--tol", f.tol, "quadrature / certificate tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--horizon", f.horizon, "integration horizon (0 = automatic)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--method", f.method, "correlation path: closed|quadrature|auto")
      ->check(CLI::IsMember({"closed", "quadrature", "auto"}));
  cmd->add_option("--kind", f.kind, "bound kind: general|weak|strong|all")
      ->check(CLI::IsMember({"general", "weak", "strong", "all"}));
  cmd->add_option("--threads", f.threads, "worker threads (default 1, bit-stable output)")
      ->check(CLI::PositiveNumber);
}

RunConfig effective_config(const FlagOverrides& f) {
  RunConfig cfg;
  if (!f.config_path.empty()) cfg = sb::io::load_config(f.config_path);
  if (!f.out.empty()) cfg.out = f.out;
  if (f.tol > 0.0) cfg.tol = f.tol;
  if (f.horizon >= 0.0) cfg.horizon = f.horizon;
  if (!f.method.empty()) cfg.method = f.method;
  if (!f.kind.empty()) cfg.kind = f.kind;
  if (f.threads > 0) cfg.threads = f.threads;
  return cfg;
}

void emit_table(const RunConfig& cfg, const sb::io::ResultTable& table) {
  if (cfg.out.empty()) {
    std::cout << table.to_csv();
  } else {
    table.write_file(cfg.out);
  }
}

void write_json_file(const std::string& path, const ojson& j) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw sb::ConfigError("cannot open \"" + path + "\" for writing");
  f << j.dump(2) << '\n';
}

// ---- eval-density ---------------------------------------------------------

int run_eval_density(const RunConfig& cfg) {
  if (!cfg.density.has_value())
    throw sb::ConfigError("eval-density: config needs a \"density\" block");
  sb::io::ResultTable t;
  t.add_metadata("config", sb::io::config_hash_hex(cfg));
  t.add_column("omega", true);
  t.add_column("j", true);
  for (double w : cfg.grid.make()) t.add_row({w, (*cfg.density)(w)});
  emit_table(cfg, t);
  return 0;
}

// ---- eval-correlation -----------------------------------------------------

int run_eval_correlation(const RunConfig& cfg) {
  if (!cfg.density.has_value())
    throw sb::ConfigError("eval-correlation: config needs a \"density\" block");
  sb::BathSpec bath{*cfg.density, cfg.beta, cfg.lambda_sq};
  bath.validate();
  sb::CorrelationOptions opt;
  opt.abs_tol = cfg.tol;
  opt.method = cfg.method == "closed"       ? sb::CorrelationMethod::ClosedForm
               : cfg.method == "quadrature" ? sb::CorrelationMethod::Quadrature
                                            : sb::CorrelationMethod::Auto;
  sb::CorrelationFn xi(bath, opt);
  sb::io::ResultTable t;
  t.add_metadata("config", sb::io::config_hash_hex(cfg));
  t.add_metadata("tol", sb::io::format_double(cfg.tol));
  t.add_metadata("method", cfg.method);
  t.add_column("t", true);
  t.add_column("re_xi", true);
  t.add_column("im_xi", true);
  t.add_column("error_bound", true);
  for (double tj : cfg.grid.make()) {
    const auto s = xi.sample(tj);
    t.add_row({tj, s.value.real(), s.value.imag(), s.error_bound});
  }
  emit_table(cfg, t);
  return 0;
}

// ---- bound ----------------------------------------------------------------

int run_bound(const RunConfig& cfg) {
  if (!cfg.variation.has_value())
    throw sb::ConfigError("bound: config needs a \"variation\" block");
  const auto& v = *cfg.variation;
  const auto grid = cfg.grid.make();
  const bool all = cfg.kind == "all";

  std::vector<sb::bounds::BoundReport> reports;
  ojson refusals = ojson::array();

  if (all || cfg.kind == "general") reports.push_back(sb::bounds::general_report(v, grid, cfg.tol));
  if (all || cfg.kind == "weak") reports.push_back(sb::bounds::weak_report(v, grid, cfg.tol));
  if (all || cfg.kind == "strong") {
    if (all) {
      // Under "all", an inapplicable strong bound is reported, not fatal.
      try {
        reports.push_back(sb::bounds::strong_report(v, grid, cfg.tol, cfg.horizon));
      } catch (const sb::TailNotCertifiable& e) {
        ojson r;
        r["kind"] = "strong";
        r["condition"] = ojson{{"state", sb::bounds::to_string(sb::bounds::ConditionState::NotSatisfied)}};
        r["message"] = e.what();
        refusals.push_back(std::move(r));
      }
    } else {
      reports.push_back(sb::bounds::strong_report(v, grid, cfg.tol, cfg.horizon));
    }
  }

  sb::io::ResultTable t;
  t.add_metadata("config", sb::io::config_hash_hex(cfg));
  t.add_metadata("tol", sb::io::format_double(cfg.tol));
  t.add_column("t", true);
  bool any_certified = false;
  for (const auto& r : reports) {
    t.add_column(sb::bounds::to_string(r.kind), r.certified);
    any_certified = any_certified || r.certified;
  }
  if (any_certified) t.add_column("best", true);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    std::vector<double> row{grid[j]};
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : reports) {
      row.push_back(r.curve[j].second);
      if (r.certified) best = std::min(best, r.curve[j].second);
    }
    if (any_certified) row.push_back(best);
    t.add_row(std::move(row));
  }

  ojson report;
  report["config"] = sb::io::config_hash_hex(cfg);
  report["kind"] = cfg.kind;
  ojson entries = ojson::array();
  for (const auto& r : reports) entries.push_back(sb::io::to_json(r));
  for (auto& r : refusals) entries.push_back(std::move(r));
  report["bounds"] = std::move(entries);

  emit_table(cfg, t);
  if (cfg.out.empty()) {
    std::cerr << report.dump(2) << '\n';  // keep stdout pure CSV
  } else {
    std::cout << report.dump(2) << '\n';
  }
  return 0;
}

// ---- heom-cert / reproduce-table2 ----------------------------------------

int run_heom_cert(const RunConfig& cfg, bool table2) {
  if (table2) {
    sb::heom::MeierTannorModel model;
    const auto result = sb::heom::reproduce_reference_table(model, cfg.tol, cfg.threads);
    std::cout << sb::io::table2_text(result);
    if (!cfg.out.empty()) write_json_file(cfg.out, sb::io::to_json(result));
    if (!result.all_pass) {
      std::fprintf(stderr, "error: benchmark table mismatch beyond tolerance policy\n");
      return 3;
    }
    return 0;
  }
  if (!cfg.heom.has_value())
    throw sb::ConfigError("heom-cert: config needs a \"heom\" block (or use --table2)");
  const auto& h = *cfg.heom;
  auto tail =
      sb::io::truncation_tail_cached(h.terms, h.beta, std::max(20000, 2 * (h.n + 2)));
  const auto cert = sb::heom::make_certificate(h.terms, h.beta, h.n, h.t_target, cfg.tol, tail);
  ojson out;
  out["config"] = sb::io::config_hash_hex(cfg);
  out["certificate"] = sb::io::to_json(cert);
  std::cout << out.dump(2) << '\n';
  if (!cfg.out.empty()) write_json_file(cfg.out, out);
  return 0;
}

void handle_sigint(int) { sb::math::global_cancel_flag().store(true); }

}  // namespace

int main(int argc, char** argv) {
  std::signal(SIGINT, handle_sigint);

  CLI::App app{
      "bath correlation functions, certified variation bounds, and "
      "Matsubara-truncation certificates"};
  app.require_subcommand(1);

  FlagOverrides f_ed, f_ec, f_b, f_hc, f_rt;
  bool table2 = false;

  auto* ed = app.add_subcommand("eval-density", "evaluate J(ω) over the configured grid");
  add_common_flags(ed, f_ed, true);
  auto* ec =
      app.add_subcommand("eval-correlation", "evaluate ξ(t) with a certified error column");
  add_common_flags(ec, f_ec, true);
  auto* b = app.add_subcommand("bound", "observable-error bound curves for a variation");
  add_common_flags(b, f_b, true);
  auto* hc = app.add_subcommand("heom-cert", "Matsubara-truncation certificate");
  add_common_flags(hc, f_hc, false);
  hc->add_flag("--table2", table2, "run the built-in benchmark bath across the reference rows");
  auto* rt = app.add_subcommand("reproduce-table2", "alias for heom-cert --table2");
  add_common_flags(rt, f_rt, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // --help → 0; bad flags → configuration error
  }

  try {
    if (ed->parsed()) return run_eval_density(effective_config(f_ed));
    if (ec->parsed()) return run_eval_correlation(effective_config(f_ec));
    if (b->parsed()) return run_bound(effective_config(f_b));
    if (hc->parsed()) return run_heom_cert(effective_config(f_hc), table2);
    if (rt->parsed()) return run_heom_cert(effective_config(f_rt), true);
  } catch (const sb::EvalBudgetExceeded& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const sb::SearchBudgetExceeded& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const sb::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const sb::DomainError& e) {  // includes delta-evaluation refusals
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const sb::Error& e) {  // tolerance / certification failures
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 2;  // unreachable: a subcommand is required
}
