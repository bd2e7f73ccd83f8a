#pragma once

// Optional on-disk memoization of Matsubara tables, enabled by setting the
// environment variable SPECBOUND_CACHE_DIR to a writable directory.
//
// Files store every number as a hex float, so a cache hit reproduces the
// freshly computed table bit for bit. Any anomaly — missing file, header or
// parameter mismatch, short read — is treated as a miss: the table is
// recomputed and the file rewritten (atomically, via a temp file + rename).
// With the variable unset this header degenerates to TruncationTail::make.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "specbound/core.hpp"
#include "specbound/density.hpp"
#include "specbound/heom/truncation.hpp"
#include "specbound/io/config.hpp"

namespace specbound::io {

inline std::optional<std::string> cache_dir() {
  const char* v = std::getenv("SPECBOUND_CACHE_DIR");
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

namespace iodetail {

inline std::string hexf(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

// Exact textual identity of a table request; hashed into the file name.
inline std::string table_identity(const std::vector<LorentzianTerm>& terms, double beta,
                                  int min_terms) {
  std::string s = "matsubara-v1|";
  s += hexf(beta);
  s += '|';
  s += std::to_string(min_terms);
  for (const auto& t : terms) {
    s += '|';
    s += hexf(t.p);
    s += ',';
    s += hexf(t.omega);
    s += ',';
    s += hexf(t.gamma);
  }
  return s;
}

inline bool read_hex(std::istream& in, double& out) {
  std::string tok;
  if (!(in >> tok)) return false;
  char* end = nullptr;
  out = std::strtod(tok.c_str(), &end);
  return end != nullptr && *end == '\0' && end != tok.c_str();
}

inline std::shared_ptr<const heom::TruncationTail> load_table(
    const std::string& path, const std::vector<LorentzianTerm>& terms, double beta) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return nullptr;
  std::string magic, version;
  if (!(in >> magic >> version) || magic != "specbound-matsubara" || version != "v1")
    return nullptr;
  double stored_beta = 0.0;
  std::size_t n_terms = 0;
  int k_terms = 0;
  if (!read_hex(in, stored_beta) || !(in >> n_terms >> k_terms)) return nullptr;
  if (stored_beta != beta || n_terms != terms.size() || k_terms < 1) return nullptr;
  for (const auto& t : terms) {
    double p = 0.0, omega = 0.0, gamma = 0.0;
    if (!read_hex(in, p) || !read_hex(in, omega) || !read_hex(in, gamma)) return nullptr;
    if (p != t.p || omega != t.omega || gamma != t.gamma) return nullptr;
  }
  std::vector<double> nu, sgn, ab;
  nu.reserve(static_cast<std::size_t>(k_terms));
  sgn.reserve(nu.capacity());
  ab.reserve(nu.capacity());
  for (int k = 0; k < k_terms; ++k) {
    double a = 0.0, b = 0.0, c = 0.0;
    if (!read_hex(in, a) || !read_hex(in, b) || !read_hex(in, c)) return nullptr;
    nu.push_back(a);
    sgn.push_back(b);
    ab.push_back(c);
  }
  try {
    return std::make_shared<const heom::TruncationTail>(terms, beta, k_terms, std::move(nu),
                                                        std::move(sgn), std::move(ab));
  } catch (const Error&) {
    return nullptr;  // inconsistent file: fall back to recomputation
  }
}

inline void store_table(const std::string& path, const heom::TruncationTail& tail) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) return;  // cache is best-effort: failure to write is not an error
    out << "specbound-matsubara v1\n";
    out << hexf(tail.beta()) << ' ' << tail.bath().size() << ' ' << tail.cached_terms() << '\n';
    for (const auto& t : tail.bath())
      out << hexf(t.p) << ' ' << hexf(t.omega) << ' ' << hexf(t.gamma) << '\n';
    const int K = tail.cached_terms();
    for (int k = 0; k < K; ++k)
      out << hexf(tail.nu_at(k)) << ' ' << hexf(tail.signed_at(k)) << ' ' << hexf(tail.abs_at(k))
          << '\n';
    if (!out) return;
  }
  std::rename(tmp.c_str(), path.c_str());
}

}  // namespace iodetail

// Builds (or loads) the Matsubara table for a Lorentzian bath, memoizing it
// on disk when SPECBOUND_CACHE_DIR is set.
inline std::shared_ptr<const heom::TruncationTail> truncation_tail_cached(
    std::vector<LorentzianTerm> terms, double beta, int min_terms = 20000) {
  const auto dir = cache_dir();
  if (!dir.has_value()) return heom::TruncationTail::make(std::move(terms), beta, min_terms);
  const std::string path =
      *dir + "/" + hex64(fnv1a(iodetail::table_identity(terms, beta, min_terms))) + ".matsubara";
  if (auto loaded = iodetail::load_table(path, terms, beta)) return loaded;
  auto fresh = heom::TruncationTail::make(std::move(terms), beta, min_terms);
  iodetail::store_table(path, *fresh);
  return fresh;
}

}  // namespace specbound::io
