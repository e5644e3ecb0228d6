#pragma once

// The d'Alembertian d_tt - d_xx is diagonal on the lattice with symbol
// 4j^2 - k^2, which vanishes exactly on the kernel modes k = +-2j.

#include "wavetorus/norms.hpp"
#include "wavetorus/spectral_core.hpp"

namespace wavetorus {

inline constexpr double kDefaultResonantTol = 1e-10;

inline SpectralField apply_box(SpectralField u) {
  u.transform([](ModeIndex m, complex& c) { c *= m.symbol(); });
  return u;
}

struct BoxSolveResult {
  SpectralField w;                    ///< supported on Eperp
  double dropped_resonant_mass = 0;   ///< l2 mass of f on the kernel
};

/// Inverts the d'Alembertian off the kernel: w(j,k) = f(j,k) / (4j^2 - k^2).
/// Throws ResonantMass when f is not (numerically) orthogonal to the kernel.
inline BoxSolveResult solve_box(const SpectralField& f, double resonant_tol = kDefaultResonantTol) {
  BoxSolveResult out{SpectralField(f.truncation()), 0.0};
  const double resonant = project(f, SubspaceTag::Kernel).l2_norm();
  const double total = f.l2_norm();
  if (total > 0 && resonant > resonant_tol * total)
    throw Error(ErrorCode::ResonantMass,
                "right-hand side has relative kernel mass " + std::to_string(resonant / total));
  out.dropped_resonant_mass = resonant;
  out.w.transform([&](ModeIndex m, complex& c) {
    if (!m.resonant()) c = f(m) / m.symbol();
  });
  return out;
}

/// ||w||_{H^1, aniso} / ||f||_{l2} for box w = f; never exceeds 1, with equality
/// exactly on the modes (0, +-1).
inline double h1_bound_ratio(const SpectralField& f, double resonant_tol = 1e-12) {
  if (relative_mass(f, SubspaceTag::Kernel) > resonant_tol)
    throw Error(ErrorCode::NotInEperp, "h1_bound_ratio: right-hand side has resonant mass");
  const double denom = f.l2_norm();
  if (denom == 0) return 0;
  const auto w = solve_box(f, resonant_tol).w;
  return sobolev_norm(w, 1.0, SobolevConvention::Aniso) / denom;
}

}  // namespace wavetorus
