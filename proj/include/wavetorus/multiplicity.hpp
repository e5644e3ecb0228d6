#pragma once

// Multiple critical points from diverse Newton seeds, identified modulo the
// time-translation group g_theta u = u(x, t + theta).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "wavetorus/parallel.hpp"
#include "wavetorus/solver.hpp"

namespace wavetorus {

/// The subspace on which the quadratic part of sigma * I is positive:
/// spatially dominated modes (|k| < 2|j|) for sigma = +1, temporally dominated
/// modes for sigma = -1. Linking subspaces and multiplicity seeds live there.
constexpr SubspaceTag linking_tag(int sigma) noexcept {
  return sigma > 0 ? SubspaceTag::Eminus : SubspaceTag::Eplus;
}

/// Fields with l2 norm below this are treated as the zero solution.
inline constexpr double kZeroFieldNorm = 1e-8;

/// max_theta <a(., . + theta), b> / (||a|| ||b||). The maximization runs over the
/// k-axis transform sum_k e^{ik theta} c_k with c_k = sum_j a(j,k) conj b(j,k):
/// a dense theta scan followed by golden-section refinement.
inline double translation_correlation(const SpectralField& a, const SpectralField& b,
                                      double* best_theta = nullptr) {
  const double na = a.l2_norm(), nb = b.l2_norm();
  if (best_theta) *best_theta = 0;
  if (na < kZeroFieldNorm && nb < kZeroFieldNorm) return 1.0;
  if (na < kZeroFieldNorm || nb < kZeroFieldNorm) return 0.0;
  const int K = std::max(a.truncation(), b.truncation());
  std::vector<complex> ck(static_cast<std::size_t>(2 * K + 1));
  a.for_each_mode([&](ModeIndex m, complex c) {
    ck[static_cast<std::size_t>(m.k + K)] += c * std::conj(b(m));
  });
  auto corr = [&](double theta) {
    double s = 0;
    for (int k = -K; k <= K; ++k) s += (ck[static_cast<std::size_t>(k + K)] * std::polar(1.0, k * theta)).real();
    return s / (na * nb);
  };
  const int L = 16 * (2 * K + 1);
  const double h = 2.0 * kPi / L;
  int best = 0;
  double best_v = corr(0.0);
  for (int i = 1; i < L; ++i) {
    const double v = corr(i * h);
    if (v > best_v) best_v = v, best = i;
  }
  double lo = (best - 1) * h, hi = (best + 1) * h;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 100; ++it) {
    const double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    if (corr(x1) > corr(x2)) hi = x2; else lo = x1;
  }
  const double theta = 0.5 * (lo + hi);
  const double refined = corr(theta);
  if (refined >= best_v) {
    if (best_theta) *best_theta = theta;
    return refined;
  }
  if (best_theta) *best_theta = best * h;
  return best_v;
}

/// Keeps the first representative of every time-translation class (in input order).
inline std::vector<SolutionState> deduplicate(std::vector<SolutionState> found, double threshold) {
  std::vector<SolutionState> unique;
  for (auto& s : found) {
    const bool seen = std::any_of(unique.begin(), unique.end(), [&](const SolutionState& u) {
      return translation_correlation(u.u, s.u) > threshold;
    });
    if (!seen) unique.push_back(std::move(s));
  }
  return unique;
}

struct MultiSeedOptions {
  int n_seeds = 32;
  double dedup_threshold = 0.99;
  std::uint64_t seed = 12345;
  std::vector<SpectralField> extra_seeds;  ///< tried after the generated seeds
  NewtonOptions newton{1e-10, 60, true};
};

/// Deterministic seed list. Seed 0 is the zero field; the rest cycle through
/// three families: random fields on all modes, kernel-dominated fields (the
/// (0,0) mode included), and fields on the linking subspace up to a growing level.
inline std::vector<SpectralField> multi_seed_fields(int M, int sigma, const MultiSeedOptions& opt) {
  std::vector<SpectralField> seeds;
  seeds.reserve(static_cast<std::size_t>(opt.n_seeds) + opt.extra_seeds.size());
  const SubspaceTag tag = linking_tag(sigma);
  for (int i = 0; i < opt.n_seeds; ++i) {
    if (i == 0) {
      seeds.emplace_back(M);
      continue;
    }
    const std::uint64_t key = derive_seed(opt.seed, static_cast<std::uint64_t>(i));
    const int round = (i - 1) / 3;
    SpectralField u(M);
    double amplitude = 0;
    switch ((i - 1) % 3) {
      case 0:
        u = random_field(key, M, SubspaceTag::All, 0.4);
        amplitude = 0.5 * (1 + round);
        break;
      case 1:
        u = random_field(key, M, SubspaceTag::Kernel, 1.0);
        amplitude = 1.0 + 0.5 * round;
        break;
      default: {
        const int level = std::min(M, 2 + round);
        u = project(truncate(random_field(key, M, tag, 0.1), level).resized(M), tag);
        amplitude = 0.75 * level;
      }
    }
    const double norm = u.l2_norm();
    if (norm > 0) u *= amplitude / norm;
    seeds.push_back(std::move(u));
  }
  for (const auto& extra : opt.extra_seeds) seeds.push_back(extra.resized(M));
  return seeds;
}

/// Newton from every seed; converged solutions are deduplicated modulo time
/// translation and returned sorted by I.
template <PointwiseSource S>
std::vector<SolutionState> multi_seed_search(const PenalizedProblem<S>& p, const MultiSeedOptions& opt) {
  if (opt.n_seeds < 0) throw Error(ErrorCode::InvalidArgument, "n_seeds must be >= 0");
  if (opt.n_seeds + opt.extra_seeds.size() < 1)
    throw Error(ErrorCode::InvalidArgument, "multi_seed_search needs at least one seed");
  const auto seeds = multi_seed_fields(p.M, p.sigma, opt);
  std::vector<std::optional<SolutionState>> results(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t i) {
    try {
      results[i] = newton_solve(p, seeds[i], opt.newton);
    } catch (const NewtonFailure&) {
    }
  });
  std::vector<SolutionState> converged;
  for (auto& r : results)
    if (r) converged.push_back(std::move(*r));
  auto unique = deduplicate(std::move(converged), opt.dedup_threshold);
  std::stable_sort(unique.begin(), unique.end(),
                   [](const SolutionState& a, const SolutionState& b) { return a.I_value < b.I_value; });
  return unique;
}

}  // namespace wavetorus
