#pragma once

// Norms and dyadic decompositions on the mode lattice.
//
// Coefficient-side norms (E, E^s, Sobolev, l^q) are finite sums and exact.
// Grid-side quantities (L^p, block sup norms) use the trapezoid rule on an
// oversampled uniform grid; sup norms are lower bounds on the true maximum.

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "wavetorus/spectral_core.hpp"

namespace wavetorus {

inline constexpr double kDefaultOversample = 4.0;

/// Energy norm with the weights |Q|/4 |k^2-4j^2| off resonance, 4j^2 on the
/// kernel, and an extra |u(0,0)|^2.
inline double norm_E(const SpectralField& u) {
  double s = 0;
  u.for_each_mode([&](ModeIndex m, complex c) {
    const double a2 = std::norm(c);
    if (m.resonant())
      s += 4.0 * m.j * m.j * a2;
    else
      s += 0.25 * kDomainMeasure * std::abs(m.symbol()) * a2;
  });
  s += std::norm(u(0, 0));
  return std::sqrt(s);
}

/// (sum_{Eperp} |k^2-4j^2|^s |u|^2)^{1/2}; u must carry no resonant mass.
inline double norm_Es(const SpectralField& u, double s, double resonant_tol = 1e-12) {
  if (!(s > 0 && s <= 1)) throw Error(ErrorCode::InvalidArgument, "norm_Es: s must lie in (0,1]");
  if (relative_mass(u, SubspaceTag::Kernel) > resonant_tol)
    throw Error(ErrorCode::NotInEperp, "norm_Es: field has resonant mass");
  double acc = 0;
  u.for_each_mode([&](ModeIndex m, complex c) {
    if (!m.resonant()) acc += std::pow(std::abs(m.symbol()), s) * std::norm(c);
  });
  return std::sqrt(acc);
}

enum class SobolevConvention {
  Aniso,  ///< weight 4j^2 + k^2
  Ell1,   ///< weight (2|j| + |k|)^2
};

inline std::string to_string(SobolevConvention c) {
  return c == SobolevConvention::Aniso ? "aniso" : "ell1";
}

/// (sum w(j,k)^s |u|^2)^{1/2}. The (0,0) mode has weight 1 in both conventions.
inline double sobolev_norm(const SpectralField& u, double s,
                           SobolevConvention convention = SobolevConvention::Aniso) {
  if (s < 0) throw Error(ErrorCode::InvalidArgument, "sobolev_norm: s must be >= 0");
  double acc = 0;
  u.for_each_mode([&](ModeIndex m, complex c) {
    double w = 1.0;
    if (m.j != 0 || m.k != 0) {
      w = convention == SobolevConvention::Aniso ? 4.0 * m.j * m.j + double(m.k) * m.k
                                                 : double(m.weight()) * m.weight();
    }
    acc += std::pow(w, s) * std::norm(c);
  });
  return std::sqrt(acc);
}

/// |u| on the oversampled grid; complex synthesis is used for non-Hermitian fields.
inline std::vector<double> grid_modulus(const SpectralField& u, double oversample) {
  const int n = sample_count(u.truncation(), oversample);
  std::vector<double> out(static_cast<std::size_t>(n) * n);
  if (u.is_hermitian(1e-13)) {
    const auto g = synthesize(u, n, n);
    std::transform(g.values().begin(), g.values().end(), out.begin(),
                   [](double v) { return std::abs(v); });
  } else {
    const auto g = synthesize_complex(u, n, n);
    std::transform(g.values().begin(), g.values().end(), out.begin(),
                   [](complex v) { return std::abs(v); });
  }
  return out;
}

enum class Measure {
  Lebesgue,    ///< dx dt over Q
  Normalized,  ///< dx dt / |Q|
};

/// (int_Q |u|^p)^{1/p} by the trapezoid rule; Normalized divides the measure by |Q|.
inline double norm_Lp(const SpectralField& u, double p, double oversample = kDefaultOversample,
                      Measure measure = Measure::Lebesgue) {
  if (p < 1) throw Error(ErrorCode::InvalidArgument, "norm_Lp: p must be >= 1");
  if (oversample < 2) throw Error(ErrorCode::InvalidArgument, "norm_Lp: oversample must be >= 2");
  const auto mod = grid_modulus(u, oversample);
  double peak = 0;
  for (double v : mod) peak = std::max(peak, v);
  if (peak == 0) return 0;
  double acc = 0;
  for (double v : mod) acc += std::pow(v / peak, p);
  double mean = acc / static_cast<double>(mod.size());
  if (measure == Measure::Lebesgue) mean *= kDomainMeasure;
  return peak * std::pow(mean, 1.0 / p);
}

/// max over the grid of |u|.
inline double norm_C0(const SpectralField& u, double oversample = kDefaultOversample) {
  double peak = 0;
  for (double v : grid_modulus(u, oversample)) peak = std::max(peak, v);
  return peak;
}

/// (sum |u(j,k)|^q)^{1/q}.
inline double norm_lq(const SpectralField& u, double q) {
  if (q < 1) throw Error(ErrorCode::InvalidArgument, "norm_lq: q must be >= 1");
  double peak = 0;
  u.for_each_mode([&](ModeIndex, complex c) { peak = std::max(peak, std::abs(c)); });
  if (peak == 0) return 0;
  double acc = 0;
  u.for_each_mode([&](ModeIndex, complex c) { acc += std::pow(std::abs(c) / peak, q); });
  return peak * std::pow(acc, 1.0 / q);
}

/// Littlewood-Paley block containing weight w = 2|j|+|k|: block 0 is w <= 2,
/// block m >= 1 is 2^m < w <= 2^{m+1}.
constexpr int dyadic_block_of(int weight) noexcept {
  if (weight <= 2) return 0;
  int m = 0;
  for (int v = weight - 1; v > 1; v >>= 1) ++m;
  return m;
}

struct DyadicBlock {
  int index = 0;
  SpectralField field;
};

struct DyadicDecomposition {
  std::vector<DyadicBlock> blocks;

  SpectralField sum() const {
    if (blocks.empty()) return SpectralField(0);
    SpectralField total(blocks.front().field.truncation());
    for (const auto& b : blocks) total += b.field;
    return total;
  }
};

inline DyadicDecomposition dyadic_blocks(const SpectralField& u) {
  DyadicDecomposition out;
  const int count = dyadic_block_of(std::max(u.truncation(), 0)) + 1;
  out.blocks.reserve(static_cast<std::size_t>(count));
  for (int m = 0; m < count; ++m) out.blocks.push_back({m, SpectralField(u.truncation())});
  u.for_each_mode([&](ModeIndex mode, complex c) {
    out.blocks[static_cast<std::size_t>(dyadic_block_of(mode.weight()))].field.at(mode) = c;
  });
  return out;
}

/// Per-block grid sup norms ||Delta_m u||_{C^0}, each sampled at the block's own
/// bandwidth min(M, 2^{m+1}).
inline std::vector<double> block_sup_norms(const SpectralField& u,
                                           double oversample = kDefaultOversample) {
  const auto dec = dyadic_blocks(u);
  std::vector<double> sups;
  sups.reserve(dec.blocks.size());
  for (const auto& block : dec.blocks) {
    if (block.field.squared_l2_norm() == 0) {
      sups.push_back(0.0);
      continue;
    }
    const int band = std::min(u.truncation(), 2 << block.index);
    sups.push_back(norm_C0(truncate(block.field, band), oversample));
  }
  return sups;
}

/// Block proxy for the C^gamma norm: sup_m 2^{gamma m} ||Delta_m u||_{C^0}.
inline double holder_estimate(const SpectralField& u, double gamma,
                              double oversample = kDefaultOversample) {
  const auto sups = block_sup_norms(u, oversample);
  double best = 0;
  for (std::size_t m = 0; m < sups.size(); ++m)
    best = std::max(best, std::exp2(gamma * static_cast<double>(m)) * sups[m]);
  return best;
}

struct Quadrants {
  SpectralField pp;  ///< j >= 0, k >= 0
  SpectralField pm;  ///< j >= 0, k < 0
  SpectralField mp;  ///< j < 0,  k >= 0
  SpectralField mm;  ///< j < 0,  k < 0

  std::array<const SpectralField*, 4> all() const { return {&pp, &pm, &mp, &mm}; }
};

/// Sign-quadrant split of the coefficients. The pieces are complex fields.
inline Quadrants quadrant_split(const SpectralField& u) {
  const int M = u.truncation();
  Quadrants q{SpectralField(M), SpectralField(M), SpectralField(M), SpectralField(M)};
  u.for_each_mode([&](ModeIndex m, complex c) {
    SpectralField& dst = m.j >= 0 ? (m.k >= 0 ? q.pp : q.pm) : (m.k >= 0 ? q.mp : q.mm);
    dst.at(m) = c;
  });
  return q;
}

struct NormReport {
  std::string name;
  double value = 0;
  std::map<std::string, double> params;
  std::string convention;
};

}  // namespace wavetorus
