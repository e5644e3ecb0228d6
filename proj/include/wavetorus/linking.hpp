#pragma once

// Linking geometry of J = sigma * I on the finite-dimensional subspaces
// V_l = {linking-tag modes with 2|j| + |k| <= l}: the maximum M(l) of J over V_l
// and the infimum of J over rho-spheres in the complement of V_{l-1}.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "wavetorus/multiplicity.hpp"
#include "wavetorus/norms.hpp"
#include "wavetorus/parallel.hpp"
#include "wavetorus/solver.hpp"

namespace wavetorus {

struct LinkingOptions {
  int n_starts = 8;
  std::uint64_t seed = 2024;
  double grad_tol = 1e-9;
  int max_ascent_iter = 400;
  std::vector<double> rho_values{0.05, 0.1, 0.2};
  int sphere_samples = 64;
};

struct SphereEstimate {
  double rho = 0;
  double inf_value = 0;
};

struct LinkingRow {
  int l = 0;
  double max_value = 0;          ///< M(l)
  double ascent_grad_norm = 0;   ///< projected gradient at the argmax
  SpectralField argmax;
  std::vector<SphereEstimate> sphere;
};

struct LinkingReport {
  std::vector<LinkingRow> rows;
  bool nondecreasing = true;
};

namespace detail {

inline bool in_level(ModeIndex m, SubspaceTag tag, int lo, int hi) {
  const int w = m.weight();
  return in_subspace(m, tag) && w >= lo && w <= hi;
}

inline SpectralField restrict_to(SpectralField u, SubspaceTag tag, int lo, int hi) {
  u.transform([&](ModeIndex m, complex& c) {
    if (!in_level(m, tag, lo, hi)) c = 0;
  });
  return u;
}

struct AscentResult {
  SpectralField u;
  double value = 0;
  double grad_norm = 0;
};

// Preconditioned gradient ascent of J = sigma I on V_l. The residual is the
// gradient of I under the pairing, and sigma * symbol > 0 on the linking tag, so
// R / symbol is an ascent direction for J whatever the sign of sigma.
template <PointwiseSource S>
AscentResult ascend(const PenalizedProblem<S>& p, SpectralField u, const LinkingOptions& opt) {
  const SubspaceTag tag = linking_tag(p.sigma);
  const int l = p.M;
  auto J = [&](const SpectralField& v) { return p.sigma * functional_I(p, v); };
  auto direction = [&](const SpectralField& v, double& gnorm) {
    SpectralField d = restrict_to(residual(p, v), tag, 1, l);
    gnorm = d.l2_norm();
    d.transform([](ModeIndex m, complex& c) {
      if (c != complex{}) c /= m.symbol();
    });
    return d;
  };
  u = restrict_to(std::move(u), tag, 1, l);
  u.symmetrize();
  double value = J(u);
  double gnorm = 0;
  SpectralField d = direction(u, gnorm);
  for (int it = 0; it < opt.max_ascent_iter && gnorm > opt.grad_tol; ++it) {
    double step = 1.0;
    SpectralField trial = u + d;
    double trial_value = J(trial);
    while (!(trial_value > value) && step > 1e-8) {
      step *= 0.5;
      trial = u + step * d;
      trial_value = J(trial);
    }
    if (!(trial_value > value)) break;
    u = std::move(trial);
    value = trial_value;
    d = direction(u, gnorm);
  }
  return {std::move(u), value, gnorm};
}

}  // namespace detail

/// For each l: M(l) by multi-start ascent (including warm starts from the
/// previous level's argmax and from 0), and sampled rho-sphere infima over
/// linking-tag modes with l <= 2|j| + |k| <= p.M. Starts run in parallel with
/// seeds derived from (opt.seed, level, start), so results are schedule-independent.
template <PointwiseSource S>
LinkingReport linking_report(const PenalizedProblem<S>& p, const std::vector<int>& l_values,
                             const LinkingOptions& opt = {}) {
  p.validate();
  const SubspaceTag tag = linking_tag(p.sigma);
  LinkingReport report;
  SpectralField previous(1);
  for (std::size_t li = 0; li < l_values.size(); ++li) {
    const int l = l_values[li];
    if (l < 1 || l > p.M)
      throw Error(ErrorCode::InvalidArgument, "linking level " + std::to_string(l) + " outside [1, M]");
    PenalizedProblem<S> sub = p;
    sub.M = l;

    std::vector<SpectralField> starts{SpectralField(l), previous.resized(l)};
    for (int i = 0; i < opt.n_starts; ++i) {
      const auto key = derive_seed(derive_seed(opt.seed, li), static_cast<std::uint64_t>(i));
      SpectralField u = detail::restrict_to(random_field(key, l, tag, 0.2), tag, 1, l);
      const double n = u.l2_norm();
      if (n > 0) u *= 0.5 * (1 + i) / n;
      starts.push_back(std::move(u));
    }
    std::vector<detail::AscentResult> results(starts.size());
    parallel_for(starts.size(), [&](std::size_t i) { results[i] = detail::ascend(sub, starts[i], opt); });
    const auto best = std::max_element(results.begin(), results.end(), [](const auto& a, const auto& b) {
      return a.value < b.value;
    });

    LinkingRow row;
    row.l = l;
    row.max_value = best->value;
    row.ascent_grad_norm = best->grad_norm;
    row.argmax = best->u;
    previous = best->u;

    for (std::size_t ri = 0; ri < opt.rho_values.size(); ++ri) {
      const double rho = opt.rho_values[ri];
      std::vector<double> values(static_cast<std::size_t>(opt.sphere_samples));
      parallel_for(values.size(), [&](std::size_t i) {
        const auto key = derive_seed(derive_seed(opt.seed ^ 0x5bd1e995u, li * 64 + ri), i);
        SpectralField u = detail::restrict_to(random_field(key, p.M, tag, 0.0), tag, l, p.M);
        const double n = norm_E(u);
        if (n == 0) {
          values[i] = std::numeric_limits<double>::infinity();
          return;
        }
        u *= rho / n;
        values[i] = p.sigma * functional_I(p, u);
      });
      row.sphere.push_back({rho, *std::min_element(values.begin(), values.end())});
    }
    if (!report.rows.empty() && row.max_value < report.rows.back().max_value) report.nondecreasing = false;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace wavetorus
