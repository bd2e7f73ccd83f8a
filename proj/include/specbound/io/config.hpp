#pragma once

// Configuration parsing and serialization for the command-line front end.
//
// The on-disk format is strict JSON (a human-writable nested key–value
// format; the exact schema is documented in the repository README). Unknown
// keys are rejected so that typos surface as errors instead of silently
// falling back to defaults. β = +infinity (zero temperature) is encoded as
// the string "inf". Serialization uses insertion-ordered objects and
// shortest round-trip float printing, so serialize → parse → serialize is
// byte-stable and a config hash is well defined.

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "specbound/bath.hpp"
#include "specbound/bounds/variation.hpp"
#include "specbound/core.hpp"
#include "specbound/density.hpp"

namespace specbound::io {

using ojson = nlohmann::ordered_json;

// 64-bit FNV-1a over bytes; used for config hashes and cache keys.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

namespace iodetail {

inline void require_object(const ojson& j, const char* what) {
  if (!j.is_object()) throw ConfigError(std::string(what) + ": expected an object");
}

inline void check_keys(const ojson& j, std::initializer_list<const char*> allowed,
                       const char* what) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known)
      throw ConfigError(std::string(what) + ": unknown key \"" + it.key() + '"');
  }
}

inline double number_at(const ojson& j, const char* key, const char* what) {
  if (!j.contains(key))
    throw ConfigError(std::string(what) + ": missing required key \"" + key + '"');
  if (!j.at(key).is_number())
    throw ConfigError(std::string(what) + ": key \"" + key + "\" must be a number");
  return j.at(key).get<double>();
}

inline double number_or(const ojson& j, const char* key, double def, const char* what) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_number())
    throw ConfigError(std::string(what) + ": key \"" + key + "\" must be a number");
  return j.at(key).get<double>();
}

inline int integer_or(const ojson& j, const char* key, int def, const char* what) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_number_integer())
    throw ConfigError(std::string(what) + ": key \"" + key + "\" must be an integer");
  return j.at(key).get<int>();
}

inline bool boolean_or(const ojson& j, const char* key, bool def, const char* what) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_boolean())
    throw ConfigError(std::string(what) + ": key \"" + key + "\" must be true or false");
  return j.at(key).get<bool>();
}

inline std::string string_or(const ojson& j, const char* key, std::string def, const char* what) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_string())
    throw ConfigError(std::string(what) + ": key \"" + key + "\" must be a string");
  return j.at(key).get<std::string>();
}

}  // namespace iodetail

// ---- inverse temperature --------------------------------------------------

inline ojson beta_to_json(double beta) {
  if (std::isinf(beta)) return ojson("inf");
  return ojson(beta);
}

inline double beta_from_json(const ojson& j, const char* what) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return beta_infinity;
    throw ConfigError(std::string(what) + ": beta string must be \"inf\", got \"" + s + '"');
  }
  if (!j.is_number()) throw ConfigError(std::string(what) + ": beta must be a number or \"inf\"");
  const double b = j.get<double>();
  if (!(b > 0.0)) throw ConfigError(std::string(what) + ": beta must be > 0");
  return b;
}

// ---- spectral densities ---------------------------------------------------

inline ojson density_to_json(const SpectralDensity& d);

namespace iodetail {

inline ojson combination_to_json(const Combination& v) {
  ojson parts = ojson::array();
  for (const auto& part : v.parts) {
    ojson p;
    p["coeff"] = part.coeff;
    p["density"] = density_to_json(part.density);
    parts.push_back(std::move(p));
  }
  ojson out;
  out["kind"] = "combination";
  out["parts"] = std::move(parts);
  return out;
}

}  // namespace iodetail

inline ojson density_to_json(const SpectralDensity& d) {
  return std::visit(
      [](const auto& v) -> ojson {
        using T = std::decay_t<decltype(v)>;
        ojson out;
        if constexpr (std::is_same_v<T, Ohmic>) {
          out["kind"] = "ohmic";
          out["prefactor"] = v.prefactor;
          out["cutoff"] = v.cutoff;
        } else if constexpr (std::is_same_v<T, Superohmic>) {
          out["kind"] = "superohmic";
          out["exponent"] = v.exponent;
          out["prefactor"] = v.prefactor;
          out["cutoff"] = v.cutoff;
        } else if constexpr (std::is_same_v<T, Subohmic>) {
          out["kind"] = "subohmic";
          out["prefactor"] = v.prefactor;
          out["cutoff"] = v.cutoff;
        } else if constexpr (std::is_same_v<T, LorentzianSum>) {
          out["kind"] = "lorentzian_sum";
          ojson terms = ojson::array();
          for (const auto& t : v.terms) {
            ojson e;
            e["p"] = t.p;
            e["omega"] = t.omega;
            e["gamma"] = t.gamma;
            terms.push_back(std::move(e));
          }
          out["terms"] = std::move(terms);
        } else if constexpr (std::is_same_v<T, DeltaMode>) {
          out["kind"] = "delta_mode";
          out["kappa"] = v.kappa;
          out["omega0"] = v.omega0;
        } else {
          static_assert(std::is_same_v<T, Combination>);
          out = iodetail::combination_to_json(v);
        }
        return out;
      },
      d.node());
}

inline SpectralDensity density_from_json(const ojson& j) {
  using namespace iodetail;
  require_object(j, "density");
  const std::string kind = string_or(j, "kind", "", "density");
  if (kind.empty()) throw ConfigError("density: missing required key \"kind\"");

  if (kind == "ohmic") {
    check_keys(j, {"kind", "prefactor", "cutoff"}, "density(ohmic)");
    return SpectralDensity(Ohmic{number_or(j, "prefactor", 1.0, "density(ohmic)"),
                                 number_or(j, "cutoff", 1.0, "density(ohmic)")});
  }
  if (kind == "superohmic") {
    check_keys(j, {"kind", "exponent", "prefactor", "cutoff"}, "density(superohmic)");
    return SpectralDensity(Superohmic{integer_or(j, "exponent", 2, "density(superohmic)"),
                                      number_or(j, "prefactor", 1.0, "density(superohmic)"),
                                      number_or(j, "cutoff", 1.0, "density(superohmic)")});
  }
  if (kind == "subohmic") {
    check_keys(j, {"kind", "prefactor", "cutoff"}, "density(subohmic)");
    return SpectralDensity(Subohmic{number_or(j, "prefactor", 1.0, "density(subohmic)"),
                                    number_or(j, "cutoff", 1.0, "density(subohmic)")});
  }
  if (kind == "lorentzian_sum") {
    check_keys(j, {"kind", "terms"}, "density(lorentzian_sum)");
    if (!j.contains("terms") || !j.at("terms").is_array())
      throw ConfigError("density(lorentzian_sum): \"terms\" must be an array");
    LorentzianSum sum;
    for (const auto& e : j.at("terms")) {
      require_object(e, "lorentzian term");
      check_keys(e, {"p", "omega", "gamma"}, "lorentzian term");
      sum.terms.push_back({number_at(e, "p", "lorentzian term"),
                           number_at(e, "omega", "lorentzian term"),
                           number_at(e, "gamma", "lorentzian term")});
    }
    return SpectralDensity(std::move(sum));
  }
  if (kind == "delta_mode") {
    check_keys(j, {"kind", "kappa", "omega0"}, "density(delta_mode)");
    return SpectralDensity(DeltaMode{number_or(j, "kappa", 1.0, "density(delta_mode)"),
                                     number_or(j, "omega0", 1.0, "density(delta_mode)")});
  }
  if (kind == "combination") {
    check_keys(j, {"kind", "parts"}, "density(combination)");
    if (!j.contains("parts") || !j.at("parts").is_array())
      throw ConfigError("density(combination): \"parts\" must be an array");
    Combination comb;
    for (const auto& e : j.at("parts")) {
      require_object(e, "combination part");
      check_keys(e, {"coeff", "density"}, "combination part");
      if (!e.contains("density"))
        throw ConfigError("combination part: missing required key \"density\"");
      comb.parts.push_back(
          {number_at(e, "coeff", "combination part"), density_from_json(e.at("density"))});
    }
    return SpectralDensity(std::move(comb));
  }
  throw ConfigError("density: unknown kind \"" + kind + '"');
}

// ---- time / frequency grids ----------------------------------------------

struct GridSpec {
  double t_min = 0.0;
  double t_max = 10.0;
  int points = 200;
  bool log_spacing = false;

  void validate() const {
    if (!(t_min >= 0.0)) throw ConfigError("grid: t_min must be ≥ 0");
    if (!(t_max > t_min)) throw ConfigError("grid: t_max must be > t_min");
    if (points < 2) throw ConfigError("grid: points must be ≥ 2");
    if (log_spacing && !(t_min > 0.0))
      throw ConfigError("grid: log spacing needs t_min > 0");
  }

  [[nodiscard]] std::vector<double> make() const {
    validate();
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(points));
    const int n = points;
    for (int i = 0; i < n; ++i) {
      if (i == 0) {
        out.push_back(t_min);
      } else if (i == n - 1) {
        out.push_back(t_max);
      } else if (log_spacing) {
        const double u = static_cast<double>(i) / (n - 1);
        out.push_back(std::exp(std::log(t_min) + u * (std::log(t_max) - std::log(t_min))));
      } else {
        const double u = static_cast<double>(i) / (n - 1);
        out.push_back(t_min + u * (t_max - t_min));
      }
    }
    return out;
  }
};

inline ojson grid_to_json(const GridSpec& g) {
  ojson out;
  out["t_min"] = g.t_min;
  out["t_max"] = g.t_max;
  out["points"] = g.points;
  out["spacing"] = g.log_spacing ? "log" : "linear";
  return out;
}

inline GridSpec grid_from_json(const ojson& j) {
  using namespace iodetail;
  require_object(j, "grid");
  check_keys(j, {"t_min", "t_max", "points", "spacing"}, "grid");
  GridSpec g;
  g.t_min = number_or(j, "t_min", g.t_min, "grid");
  g.t_max = number_or(j, "t_max", g.t_max, "grid");
  g.points = integer_or(j, "points", g.points, "grid");
  const std::string spacing = string_or(j, "spacing", "linear", "grid");
  if (spacing == "log") {
    g.log_spacing = true;
  } else if (spacing == "linear") {
    g.log_spacing = false;
  } else {
    throw ConfigError("grid: spacing must be \"linear\" or \"log\"");
  }
  g.validate();
  return g;
}

// ---- variation block ------------------------------------------------------

inline ojson variation_to_json(const bounds::VariationSpec& v) {
  ojson out;
  if (v.delta_j.has_value()) out["delta_j"] = density_to_json(*v.delta_j);
  out["beta"] = beta_to_json(v.beta);
  out["lambda_sq"] = v.lambda_sq;
  out["coupling_absorbed"] = v.coupling_absorbed;
  out["observable_norm"] = v.observable_norm;
  return out;
}

inline bounds::VariationSpec variation_from_json(const ojson& j) {
  using namespace iodetail;
  require_object(j, "variation");
  check_keys(j, {"delta_j", "beta", "lambda_sq", "coupling_absorbed", "observable_norm"},
             "variation");
  bounds::VariationSpec v;
  if (j.contains("delta_j")) v.delta_j = density_from_json(j.at("delta_j"));
  if (j.contains("beta")) v.beta = beta_from_json(j.at("beta"), "variation");
  v.lambda_sq = number_or(j, "lambda_sq", 1.0, "variation");
  v.coupling_absorbed = boolean_or(j, "coupling_absorbed", false, "variation");
  v.observable_norm = number_or(j, "observable_norm", 1.0, "variation");
  v.validate();
  return v;
}

// ---- truncation-certificate block ----------------------------------------

struct HeomConfig {
  std::vector<LorentzianTerm> terms;  // coupling-absorbed Lorentzian weights
  double beta = 1.0;
  int n = 0;            // truncation order
  double t_target = 30.0;
};

inline ojson heom_to_json(const HeomConfig& h) {
  ojson terms = ojson::array();
  for (const auto& t : h.terms) {
    ojson e;
    e["p"] = t.p;
    e["omega"] = t.omega;
    e["gamma"] = t.gamma;
    terms.push_back(std::move(e));
  }
  ojson out;
  out["terms"] = std::move(terms);
  out["beta"] = beta_to_json(h.beta);
  out["n"] = h.n;
  out["t_target"] = h.t_target;
  return out;
}

inline HeomConfig heom_from_json(const ojson& j) {
  using namespace iodetail;
  require_object(j, "heom");
  check_keys(j, {"terms", "beta", "n", "t_target"}, "heom");
  HeomConfig h;
  if (!j.contains("terms") || !j.at("terms").is_array() || j.at("terms").empty())
    throw ConfigError("heom: \"terms\" must be a non-empty array");
  for (const auto& e : j.at("terms")) {
    require_object(e, "heom term");
    check_keys(e, {"p", "omega", "gamma"}, "heom term");
    h.terms.push_back({number_at(e, "p", "heom term"), number_at(e, "omega", "heom term"),
                       number_at(e, "gamma", "heom term")});
  }
  if (j.contains("beta")) h.beta = beta_from_json(j.at("beta"), "heom");
  h.n = integer_or(j, "n", 0, "heom");
  if (h.n < 0) throw ConfigError("heom: n must be ≥ 0");
  h.t_target = number_or(j, "t_target", 30.0, "heom");
  if (!(h.t_target > 0.0)) throw ConfigError("heom: t_target must be > 0");
  return h;
}

// ---- full run configuration ----------------------------------------------

struct RunConfig {
  std::optional<SpectralDensity> density;
  double beta = 1.0;
  double lambda_sq = 1.0;
  std::optional<bounds::VariationSpec> variation;
  std::optional<HeomConfig> heom;
  GridSpec grid;
  double tol = 1e-9;
  double horizon = 0.0;        // 0 = choose automatically
  std::string method = "auto";  // closed | quadrature | auto
  std::string kind = "all";     // general | weak | strong | all
  int threads = 1;
  std::string out;  // output path; empty = stdout
};

inline ojson config_to_json(const RunConfig& c) {
  ojson out;
  if (c.density.has_value()) out["density"] = density_to_json(*c.density);
  out["beta"] = beta_to_json(c.beta);
  out["lambda_sq"] = c.lambda_sq;
  if (c.variation.has_value()) out["variation"] = variation_to_json(*c.variation);
  if (c.heom.has_value()) out["heom"] = heom_to_json(*c.heom);
  out["grid"] = grid_to_json(c.grid);
  out["tol"] = c.tol;
  out["horizon"] = c.horizon;
  out["method"] = c.method;
  out["kind"] = c.kind;
  out["threads"] = c.threads;
  out["out"] = c.out;
  return out;
}

inline RunConfig config_from_json(const ojson& j) {
  using namespace iodetail;
  require_object(j, "config");
  check_keys(j,
             {"density", "beta", "lambda_sq", "variation", "heom", "grid", "tol", "horizon",
              "method", "kind", "threads", "out"},
             "config");
  RunConfig c;
  if (j.contains("density")) c.density = density_from_json(j.at("density"));
  if (j.contains("beta")) c.beta = beta_from_json(j.at("beta"), "config");
  c.lambda_sq = number_or(j, "lambda_sq", 1.0, "config");
  if (!(c.lambda_sq >= 0.0)) throw ConfigError("config: lambda_sq must be ≥ 0");
  if (j.contains("variation")) c.variation = variation_from_json(j.at("variation"));
  if (j.contains("heom")) c.heom = heom_from_json(j.at("heom"));
  if (j.contains("grid")) c.grid = grid_from_json(j.at("grid"));
  c.tol = number_or(j, "tol", c.tol, "config");
  if (!(c.tol > 0.0)) throw ConfigError("config: tol must be > 0");
  c.horizon = number_or(j, "horizon", c.horizon, "config");
  if (!(c.horizon >= 0.0)) throw ConfigError("config: horizon must be ≥ 0");
  c.method = string_or(j, "method", c.method, "config");
  if (c.method != "auto" && c.method != "closed" && c.method != "quadrature")
    throw ConfigError("config: method must be auto, closed or quadrature");
  c.kind = string_or(j, "kind", c.kind, "config");
  if (c.kind != "all" && c.kind != "general" && c.kind != "weak" && c.kind != "strong")
    throw ConfigError("config: kind must be general, weak, strong or all");
  c.threads = integer_or(j, "threads", c.threads, "config");
  if (c.threads < 1) throw ConfigError("config: threads must be ≥ 1");
  c.out = string_or(j, "out", c.out, "config");
  return c;
}

inline RunConfig parse_config(const std::string& text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON — ") + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open \"" + path + '"');
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

inline std::string serialize_config(const RunConfig& c) { return config_to_json(c).dump(2) + "\n"; }

// Stable identifier of a configuration: FNV-1a over its canonical dump.
inline std::string config_hash_hex(const RunConfig& c) {
  return hex64(fnv1a(config_to_json(c).dump()));
}

}  // namespace specbound::io
