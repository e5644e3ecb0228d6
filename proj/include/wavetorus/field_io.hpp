#pragma once

// JSON field files:
//   { "M": int, "domain": "x:[0,pi],t:[0,2pi]", "normalization": "unit-modes",
//     "coeffs": [ {"j":int, "k":int, "re":float, "im":float}, ... ] }
// Only the half-lattice (k > 0, or k = 0 and j >= 0) is stored; readers
// restore the Hermitian partners.

#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>
#include "wavetorus/spectral_core.hpp"

namespace wavetorus {

inline constexpr const char* kFieldDomain = "x:[0,pi],t:[0,2pi]";
inline constexpr const char* kFieldNormalization = "unit-modes";

inline bool in_half_lattice(ModeIndex m) noexcept { return m.k > 0 || (m.k == 0 && m.j >= 0); }

inline nlohmann::json field_to_json(const SpectralField& u) {
  if (!u.is_hermitian(1e-12))
    throw Error(ErrorCode::InvalidArgument, "field files store real (Hermitian) fields only");
  nlohmann::json coeffs = nlohmann::json::array();
  u.for_each_mode([&](ModeIndex m, complex c) {
    if (!in_half_lattice(m)) return;
    const double im = (m.j == 0 && m.k == 0) ? 0.0 : c.imag();
    coeffs.push_back({{"j", m.j}, {"k", m.k}, {"re", c.real()}, {"im", im}});
  });
  return {{"M", u.truncation()},
          {"domain", kFieldDomain},
          {"normalization", kFieldNormalization},
          {"coeffs", std::move(coeffs)}};
}

inline SpectralField field_from_json(const nlohmann::json& doc) {
  try {
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      const auto& key = it.key();
      if (key != "M" && key != "domain" && key != "normalization" && key != "coeffs")
        throw Error(ErrorCode::ParseError, "field: unknown key '" + key + "'");
    }
    const int M = doc.at("M").get<int>();
    if (doc.contains("domain") && doc["domain"].get<std::string>() != kFieldDomain)
      throw Error(ErrorCode::ParseError, "field.domain: expected " + std::string(kFieldDomain));
    if (doc.contains("normalization") &&
        doc["normalization"].get<std::string>() != kFieldNormalization)
      throw Error(ErrorCode::ParseError,
                  "field.normalization: expected " + std::string(kFieldNormalization));
    SpectralField u(M);
    std::size_t index = 0;
    for (const auto& entry : doc.at("coeffs")) {
      const ModeIndex m{entry.at("j").get<int>(), entry.at("k").get<int>()};
      const std::string where = "field.coeffs[" + std::to_string(index++) + "]";
      if (!in_half_lattice(m))
        throw Error(ErrorCode::ParseError, where + ": mode outside the stored half-lattice");
      if (!u.contains(m)) throw Error(ErrorCode::ParseError, where + ": mode exceeds truncation M");
      const complex c{entry.at("re").get<double>(), entry.value("im", 0.0)};
      if (m.j == 0 && m.k == 0) {
        u.at(m) = c.real();
      } else {
        u.at(m) = c;
        u.at(-m) = std::conj(c);
      }
    }
    return u;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("field: ") + e.what());
  }
}

inline void write_field(const std::string& path, const SpectralField& u) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
  out << field_to_json(u).dump(2) << '\n';
}

inline SpectralField read_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
  return field_from_json(doc);
}

}  // namespace wavetorus
