#pragma once

#include <cmath>
#include <fstream>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "gevrey/errors.hpp"
#include "gevrey/field.hpp"
#include "gevrey/spectral_ops.hpp"

// Field files hold the half-spectrum:
//   {"N": 8, "solenoidal": true,
//    "modes": [{"k": [i, j, l], "re": [x, y, z], "im": [x, y, z]}, ...]}
// Only one wavevector of each {k, -k} pair may appear; the partner is implied by
// conjugation. Modes omitted from the list are zero.

namespace gevrey {

/// Serializes the canonical half of the spectrum, skipping zero modes.
inline nlohmann::json field_to_json(const SpectralField& u, bool solenoidal = true) {
  nlohmann::json modes = nlohmann::json::array();
  const WavevectorGrid& g = u.grid();
  g.for_each_mode([&](std::size_t idx, const Wavevector& k) {
    if (!g.is_canonical(idx)) return;
    const Vec3c& v = u[idx];
    if (norm_sq(v) == 0.0) return;
    modes.push_back({{"k", {k[0], k[1], k[2]}},
                     {"re", {v[0].real(), v[1].real(), v[2].real()}},
                     {"im", {v[0].imag(), v[1].imag(), v[2].imag()}}});
  });
  return {{"N", g.cutoff()}, {"solenoidal", solenoidal}, {"modes", std::move(modes)}};
}

/// Rebuilds a field from the half-spectrum schema and validates every invariant.
inline SpectralField field_from_json(const nlohmann::json& j) {
  auto need = [&](const char* key) -> const nlohmann::json& {
    if (!j.contains(key)) throw ConfigError(std::string("field file is missing '") + key + "'");
    return j.at(key);
  };
  const nlohmann::json& jn = need("N");
  if (!jn.is_number_integer()) throw ConfigError("field cutoff 'N' must be an integer");
  SpectralField u{WavevectorGrid(jn.get<int>())};
  const nlohmann::json& modes = need("modes");
  if (!modes.is_array()) throw ConfigError("'modes' must be an array");

  std::set<std::size_t> seen;
  for (const auto& m : modes) {
    auto triple = [&](const char* key) {
      if (!m.contains(key) || !m.at(key).is_array() || m.at(key).size() != 3)
        throw ConfigError(std::string("mode entry needs a 3-element '") + key + "'");
      return m.at(key);
    };
    const auto jk = triple("k");
    const auto jre = triple("re");
    const auto jim = triple("im");
    Wavevector k{};
    Vec3c v{};
    for (int i = 0; i < 3; ++i) {
      if (!jk[i].is_number_integer()) throw ConfigError("wavevector components must be integers");
      k[i] = jk[i].get<int>();
      const double re = jre[i].get<double>();
      const double im = jim[i].get<double>();
      if (!std::isfinite(re) || !std::isfinite(im)) throw ConfigError("non-finite coefficient in field file");
      v[i] = Complex(re, im);
    }
    if (!u.grid().contains(k)) throw ConfigError("mode outside the grid or at k = 0");
    const std::size_t idx = u.grid().index(k);
    const std::size_t pair = std::min(idx, u.grid().negated(idx));
    if (!seen.insert(pair).second) throw ConfigError("wavevector pair listed twice in field file");
    u.set_mode(k, v);
  }
  if (j.value("solenoidal", false) && !is_solenoidal(u, 1e-12))
    throw ConfigError("field flagged solenoidal has k . u_hat(k) != 0");
  return u;
}

inline void save_field(const SpectralField& u, const std::string& path, bool solenoidal = true) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write field file " + path);
  out << field_to_json(u, solenoidal).dump() << '\n';
}

inline SpectralField load_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open field file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("field file " + path + " is not valid JSON: " + e.what());
  }
  return field_from_json(j);
}

}  // namespace gevrey
