#pragma once

// Shared generators and brute-force oracles for the test suites.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "wavetorus/spectral_core.hpp"

namespace wt_test {

using wavetorus::complex;
using wavetorus::ModeIndex;
using wavetorus::SpectralField;
using wavetorus::SubspaceTag;

/// Random Hermitian field on `tag`: Gaussian coefficients with an optional
/// exponential envelope, drawn from a plain std::mt19937_64 (independent of the
/// library's hashing generator).
inline SpectralField gaussian_field(std::mt19937_64& rng, int M, SubspaceTag tag = SubspaceTag::All,
                                    double decay = 0.0) {
  std::normal_distribution<double> n(0.0, 1.0);
  SpectralField u(M);
  u.transform([&](ModeIndex m, complex& c) {
    if (!wavetorus::in_subspace(m, tag)) return;
    const bool upper = m.k > 0 || (m.k == 0 && m.j > 0);
    if (!upper && !(m.j == 0 && m.k == 0)) return;
    const double env = std::exp(-decay * m.weight());
    if (m.j == 0 && m.k == 0)
      c = env * n(rng);
    else
      c = env * complex(n(rng), n(rng));
  });
  u.transform([&](ModeIndex m, complex& c) {
    const bool upper = m.k > 0 || (m.k == 0 && m.j >= 0);
    if (!upper) c = std::conj(u(-m));
  });
  return u;
}

/// Complex (non-Hermitian) random field.
inline SpectralField complex_field(std::mt19937_64& rng, int M) {
  std::normal_distribution<double> n(0.0, 1.0);
  SpectralField u(M);
  u.transform([&](ModeIndex, complex& c) { c = complex(n(rng), n(rng)); });
  return u;
}

/// Direct evaluation of sum u(j,k) e^{i(2jx+kt)}.
inline complex evaluate(const SpectralField& u, double x, double t) {
  complex s{};
  u.for_each_mode([&](ModeIndex m, complex c) { s += c * std::polar(1.0, 2.0 * m.j * x + m.k * t); });
  return s;
}

inline SpectralField single_mode(int M, int j, int k, complex c = 1.0) {
  SpectralField u(M);
  u.at(j, k) = c;
  return u;
}

/// cos(2jx + kt) = (e^{i(.)} + e^{-i(.)})/2.
inline SpectralField cosine(int M, int j, int k, double amplitude = 1.0) {
  SpectralField u(M);
  if (j == 0 && k == 0) {
    u.at(0, 0) = amplitude;
    return u;
  }
  u.at(j, k) = 0.5 * amplitude;
  u.at(-j, -k) = 0.5 * amplitude;
  return u;
}

}  // namespace wt_test
