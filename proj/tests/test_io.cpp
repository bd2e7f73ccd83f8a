// Configuration round trips, strict-key validation, deterministic CSV
// emission, report serialization, and the on-disk Matsubara table cache.
#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "specbound/io/cache.hpp"
#include "specbound/io/config.hpp"
#include "specbound/io/report.hpp"
#include "specbound/io/table.hpp"

using namespace specbound;
using io::ojson;

namespace {

io::RunConfig full_config() {
  io::RunConfig c;
  Combination comb;
  comb.parts.push_back({1.0, SpectralDensity(Ohmic{0.5, 3.75})});
  comb.parts.push_back({-0.25, SpectralDensity(LorentzianSum{{{2.0, 1.5, 0.4}}})});
  c.density = SpectralDensity(comb);
  c.beta = 1.4;
  c.lambda_sq = 0.4;
  bounds::VariationSpec v;
  v.delta_j = SpectralDensity(Superohmic{2, 0.3, 1.2});
  v.beta = 1.4;
  v.lambda_sq = 0.4;
  v.observable_norm = 2.0;
  c.variation = v;
  io::HeomConfig h;
  h.terms = {{2.5, 1.5, 0.4}};
  h.beta = 1.4;
  h.n = 3;
  h.t_target = 30.0;
  c.heom = h;
  c.grid = io::GridSpec{0.1, 25.0, 40, true};
  c.tol = 1e-8;
  c.horizon = 100.0;
  c.method = "closed";
  c.kind = "strong";
  c.threads = 2;
  c.out = "result.csv";
  return c;
}

std::string temp_dir() {
  char tmpl[] = "/tmp/specbound_io_XXXXXX";
  const char* d = mkdtemp(tmpl);
  REQUIRE(d != nullptr);
  return d;
}

}  // namespace

TEST_CASE("config serialization round trips to identical json") {
  const io::RunConfig c = full_config();
  const std::string text = io::serialize_config(c);
  const io::RunConfig back = io::parse_config(text);
  CHECK(io::serialize_config(back) == text);
  CHECK(io::config_hash_hex(back) == io::config_hash_hex(c));

  // Defaults round trip too.
  io::RunConfig d;
  CHECK(io::serialize_config(io::parse_config(io::serialize_config(d))) ==
        io::serialize_config(d));
}

TEST_CASE("infinite temperature is encoded as the string inf") {
  io::RunConfig c;
  c.density = SpectralDensity(Subohmic{1.0, 2.0});
  c.beta = beta_infinity;
  const std::string text = io::serialize_config(c);
  CHECK(text.find("\"inf\"") != std::string::npos);
  const io::RunConfig back = io::parse_config(text);
  CHECK(std::isinf(back.beta));
  CHECK(io::beta_from_json(ojson("infinity"), "beta") == beta_infinity);
  CHECK_THROWS_AS(io::beta_from_json(ojson("warm"), "beta"), ConfigError);
  CHECK_THROWS_AS(io::beta_from_json(ojson(-1.0), "beta"), ConfigError);
}

TEST_CASE("every density kind survives a json round trip") {
  const SpectralDensity cases[] = {
      SpectralDensity(Ohmic{0.5, 3.75}),
      SpectralDensity(Superohmic{3, 1.0, 2.0}),
      SpectralDensity(Subohmic{0.7, 1.1}),
      SpectralDensity(LorentzianSum{{{12.0677, 1.5, 0.4}, {-19.9762, 0.3, 5.4}}}),
      SpectralDensity(DeltaMode{0.3, 2.0}),
  };
  for (const auto& d : cases) {
    const ojson j = io::density_to_json(d);
    const ojson j2 = io::density_to_json(io::density_from_json(j));
    REQUIRE(j == j2);
  }
  // Nested combination.
  Combination comb;
  comb.parts.push_back({2.0, cases[0]});
  comb.parts.push_back({-0.5, cases[3]});
  const ojson j = io::density_to_json(SpectralDensity(comb));
  CHECK(io::density_to_json(io::density_from_json(j)) == j);
}

TEST_CASE("unknown or ill-typed configuration keys are rejected") {
  CHECK_THROWS_AS(io::parse_config("{\"bogus\": 1}"), ConfigError);
  CHECK_THROWS_AS(io::parse_config("not json at all"), ConfigError);
  CHECK_THROWS_AS(io::parse_config("{\"tol\": \"tight\"}"), ConfigError);
  CHECK_THROWS_AS(io::parse_config("{\"tol\": -1.0}"), ConfigError);
  CHECK_THROWS_AS(io::parse_config("{\"method\": \"guess\"}"), ConfigError);
  CHECK_THROWS_AS(io::parse_config("{\"kind\": \"softest\"}"), ConfigError);
  CHECK_THROWS_AS(io::parse_config("{\"threads\": 0}"), ConfigError);
  CHECK_THROWS_AS(io::parse_config("{\"density\": {\"kind\": \"fractal\"}}"), ConfigError);
  CHECK_THROWS_AS(io::parse_config("{\"density\": {\"kind\": \"ohmic\", \"spin\": 1}}"),
                  ConfigError);
  CHECK_THROWS_AS(io::parse_config("{\"grid\": {\"points\": 1}}"), ConfigError);
  CHECK_THROWS_AS(io::parse_config("{\"grid\": {\"t_min\": 2.0, \"t_max\": 1.0}}"), ConfigError);
  CHECK_THROWS_AS(io::parse_config("{\"heom\": {\"terms\": []}}"), ConfigError);
  CHECK_THROWS_AS(io::parse_config("{\"beta\": 0}"), ConfigError);
}

TEST_CASE("grid specification produces exact endpoints and valid spacing") {
  io::GridSpec lin{0.0, 10.0, 5, false};
  const auto g = lin.make();
  REQUIRE(g.size() == 5);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 10.0);
  CHECK(g[2] == 5.0);

  io::GridSpec log{0.1, 100.0, 31, true};
  const auto gl = log.make();
  REQUIRE(gl.size() == 31);
  CHECK(gl.front() == 0.1);
  CHECK(gl.back() == 100.0);
  for (std::size_t i = 1; i < gl.size(); ++i) REQUIRE(gl[i] > gl[i - 1]);
  // Log spacing: constant ratio between neighbors.
  const double r0 = gl[1] / gl[0], r1 = gl[20] / gl[19];
  CHECK(r0 == Catch::Approx(r1).epsilon(1e-12));

  io::GridSpec bad{0.0, 10.0, 5, true};  // log spacing needs t_min > 0
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("numbers print with round-trip precision") {
  for (double v : {0.1, 1.0 / 3.0, 2.1669887808579782211, 1e-300, -4.9406564584124654e-324}) {
    const std::string s = io::format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(io::format_double(1.0) == "1");
}

TEST_CASE("result tables emit a deterministic annotated csv") {
  io::ResultTable t;
  t.add_column("t", true);
  t.add_column("estimate", false);
  t.add_metadata("config", "deadbeef");
  t.add_row({0.0, 1.0});
  t.add_row({0.5, 0.1});
  const std::string csv = t.to_csv();
  const std::string expect =
      "# specbound 1.0.0\n"
      "# config: deadbeef\n"
      "# certified: t=yes estimate=no\n"
      "t,estimate\n"
      "0,1\n"
      "0.5,0.10000000000000001\n";
  CHECK(csv == expect);
  CHECK(t.to_csv() == csv);  // repeatable byte-for-byte
  CHECK(t.column_index("estimate") == 1);
  CHECK_THROWS_AS(t.column_index("missing"), ConfigError);
  CHECK_THROWS_AS(t.add_row({1.0}), ConfigError);
  CHECK_THROWS_AS(t.add_column("late", true), ConfigError);

  const std::string dir = temp_dir();
  const std::string path = dir + "/out.csv";
  t.write_file(path);
  std::ifstream in(path, std::ios::binary);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(content == csv);
  std::remove(path.c_str());
}

TEST_CASE("fnv1a matches its published test vectors") {
  CHECK(io::fnv1a("") == 0xcbf29ce484222325ull);
  CHECK(io::fnv1a("a") == 0xaf63dc4c8601ec8cull);
  CHECK(io::hex64(0xcbf29ce484222325ull) == "cbf29ce484222325");
  // Distinct configs hash differently.
  io::RunConfig a, b;
  b.tol = 2e-9;
  CHECK(io::config_hash_hex(a) != io::config_hash_hex(b));
}

TEST_CASE("reports serialize with not-applicable fields omitted") {
  bounds::BoundReport rep;
  rep.kind = bounds::BoundKind::Weak;
  rep.curve = {{0.0, 0.0}, {1.0, 0.25}};
  rep.certified = true;
  rep.tolerance = 1e-8;
  rep.weak_C = 0.7;
  const ojson j = io::to_json(rep);
  CHECK(j["kind"] == "weak");
  CHECK(j["weak_C"] == 0.7);
  CHECK_FALSE(j.contains("gamma"));  // NaN payloads stay out of the report
  CHECK_FALSE(j.contains("eta"));
  CHECK(j["bound_at_t_max"] == 0.25);
  CHECK(j["condition"]["state"] == "undetermined");

  bounds::GammaEta ge;
  ge.gamma = 0.25;
  ge.eta = 0.0;
  ge.certified = true;
  const ojson gj = io::to_json(ge);
  CHECK(gj["gamma"] == 0.25);
  CHECK(gj["certified"] == true);
}

TEST_CASE("reference-table text report carries per-row verdicts") {
  heom::Table2Result res;
  heom::Table2Row row;
  row.beta = 0.4;
  row.N = 2;
  row.rel_analytic_pct = 27.94;
  row.ref_analytic_pct = 27.94;
  row.rel_numeric_pct = 9.43;
  row.ref_numeric_pct = 9.43;
  row.min_n_analytic = 3;
  row.ref_min_n_analytic = 3;
  row.min_n_numeric = 2;
  row.ref_min_n_numeric = 2;
  row.pass_analytic = row.pass_numeric = row.pass_min_analytic = row.pass_min_numeric = true;
  res.rows.push_back(row);
  res.all_pass = true;
  const std::string text = io::table2_text(res);
  CHECK(text.find("PASS") != std::string::npos);
  CHECK(text.find("0.4") != std::string::npos);
  CHECK(text.find("all rows PASS") != std::string::npos);

  res.rows[0].pass_numeric = false;
  res.all_pass = false;
  CHECK(io::table2_text(res).find("FAIL") != std::string::npos);
}

TEST_CASE("matsubara tables cache to disk and reload bitwise identical") {
  const std::string dir = temp_dir();
  REQUIRE(setenv("SPECBOUND_CACHE_DIR", dir.c_str(), 1) == 0);
  const std::vector<LorentzianTerm> bath{{2.5, 1.5, 0.4}};

  const auto fresh = io::truncation_tail_cached(bath, 1.4, 400);
  REQUIRE(fresh != nullptr);
  // A cache file appeared.
  std::string cache_file;
  {
    const std::string ident = io::iodetail::table_identity(bath, 1.4, 400);
    cache_file = dir + "/" + io::hex64(io::fnv1a(ident)) + ".matsubara";
    std::ifstream probe(cache_file);
    REQUIRE(probe.good());
  }

  const auto loaded = io::truncation_tail_cached(bath, 1.4, 400);
  REQUIRE(loaded != nullptr);
  const heom::TruncationTail direct(bath, 1.4, 400);
  CHECK(loaded->cached_terms() == direct.cached_terms());
  for (int k : {0, 1, 57, direct.cached_terms() - 1}) {
    REQUIRE(loaded->nu_at(k) == direct.nu_at(k));
    REQUIRE(loaded->signed_at(k) == direct.signed_at(k));
    REQUIRE(loaded->abs_at(k) == direct.abs_at(k));
  }
  CHECK(loaded->sample(3, 0.7).value.real() == direct.sample(3, 0.7).value.real());

  // Corruption is survived by recomputing.
  {
    std::ofstream trash(cache_file, std::ios::binary | std::ios::trunc);
    trash << "not a table\n";
  }
  const auto recovered = io::truncation_tail_cached(bath, 1.4, 400);
  REQUIRE(recovered != nullptr);
  CHECK(recovered->sample(3, 0.7).value.real() == direct.sample(3, 0.7).value.real());

  REQUIRE(unsetenv("SPECBOUND_CACHE_DIR") == 0);
  CHECK_FALSE(io::cache_dir().has_value());
}

TEST_CASE("variation and heom blocks validate while parsing") {
  const ojson v = io::variation_to_json(full_config().variation.value());
  CHECK(io::variation_to_json(io::variation_from_json(v)) == v);
  const ojson h = io::heom_to_json(full_config().heom.value());
  CHECK(io::heom_to_json(io::heom_from_json(h)) == h);
  ojson bad = h;
  bad["t_target"] = -1.0;
  CHECK_THROWS_AS(io::heom_from_json(bad), ConfigError);
}
