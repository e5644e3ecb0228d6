#pragma once

// Ensemble checks of the function-space inequalities, the manufactured-solution
// convergence study and the beta-uniform bound monitor.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wavetorus/continuation.hpp"
#include "wavetorus/dalembert.hpp"
#include "wavetorus/norms.hpp"
#include "wavetorus/parallel.hpp"
#include "wavetorus/solver.hpp"

namespace wavetorus {

struct EnsembleSpec {
  int size = 1000;
  int M = 32;
  double decay = 0.0;
  std::uint64_t seed = 777;
  SubspaceTag tag = SubspaceTag::Eperp;
  double oversample = kDefaultOversample;

  /// Trial i of the ensemble. Because random_field hashes each mode, trial i at
  /// truncation M is the truncation of trial i at any larger M.
  SpectralField field(int i) const {
    return random_field(derive_seed(seed, static_cast<std::uint64_t>(i)), M, tag, decay);
  }
};

struct RatioSummary {
  double max = 0;
  double mean = 0;
  double q05 = 0, q50 = 0, q95 = 0;
};

inline RatioSummary summarize(std::vector<double> v) {
  RatioSummary s;
  // NaN ratios (failed trials) cannot be ordered; they poison the max only.
  const auto finite_end = std::remove_if(v.begin(), v.end(), [](double x) { return std::isnan(x); });
  const bool had_nan = finite_end != v.end();
  v.erase(finite_end, v.end());
  if (v.empty()) {
    if (had_nan) s.max = s.mean = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  std::sort(v.begin(), v.end());
  auto q = [&](double t) {
    const double pos = t * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  s.max = v.back();
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  s.q05 = q(0.05);
  s.q50 = q(0.5);
  s.q95 = q(0.95);
  if (had_nan) s.max = std::numeric_limits<double>::quiet_NaN();
  return s;
}

struct InequalityReport {
  std::string name;
  int ensemble_size = 0;
  std::map<std::string, double> parameters;
  RatioSummary ratios;
  int violation_count = 0;       ///< bound exceeded, or ratio not finite
  std::vector<double> per_trial;
};

namespace detail {

template <class Ratio>
InequalityReport run_ensemble(std::string name, const EnsembleSpec& spec,
                              std::map<std::string, double> params, Ratio ratio,
                              std::optional<double> bound = std::nullopt) {
  if (spec.size < 1) throw Error(ErrorCode::InvalidArgument, "ensemble size must be >= 1");
  InequalityReport r;
  r.name = std::move(name);
  r.ensemble_size = spec.size;
  r.parameters = std::move(params);
  r.parameters["M"] = spec.M;
  r.parameters["decay"] = spec.decay;
  r.per_trial.assign(static_cast<std::size_t>(spec.size), 0.0);
  parallel_for(r.per_trial.size(), [&](std::size_t i) {
    r.per_trial[i] = ratio(spec.field(static_cast<int>(i)));
  });
  for (double v : r.per_trial)
    if (!std::isfinite(v) || (bound && v > *bound)) ++r.violation_count;
  r.ratios = summarize(r.per_trial);
  return r;
}

}  // namespace detail

/// ||u||_{L^p} / (||u||_{L^2}^{1-s} ||u||_{E^1}^s) with s = (p-2)/(p-1).
inline double gn_exponent(double p) { return (p - 2) / (p - 1); }

inline double gn_ratio(const SpectralField& u, double p, double oversample = kDefaultOversample) {
  const double s = gn_exponent(p);
  return norm_Lp(u, p, oversample) /
         (std::pow(norm_Lp(u, 2, oversample), 1 - s) * std::pow(norm_Es(u, 1.0), s));
}

inline InequalityReport check_gn(const EnsembleSpec& spec, double p) {
  if (!(p > 2)) throw Error(ErrorCode::InvalidArgument, "Gagliardo-Nirenberg check needs p > 2");
  return detail::run_ensemble("gagliardo_nirenberg", spec, {{"p", p}, {"s", gn_exponent(p)}},
                              [&](const SpectralField& u) { return gn_ratio(u, p, spec.oversample); });
}

/// p = (2 - s)/(1 - s), the Lebesgue exponent reached from E^s.
inline double embedding_exponent(double s) { return (2 - s) / (1 - s); }

inline double embedding_ratio(const SpectralField& u, double s, double oversample = kDefaultOversample) {
  return norm_Lp(u, embedding_exponent(s), oversample) / norm_Es(u, s);
}

inline InequalityReport check_embedding(const EnsembleSpec& spec, double s) {
  if (!(s > 0 && s < 1)) throw Error(ErrorCode::InvalidArgument, "embedding check needs 0 < s < 1");
  return detail::run_ensemble("embedding", spec, {{"s", s}, {"p", embedding_exponent(s)}},
                              [&](const SpectralField& u) { return embedding_ratio(u, s, spec.oversample); });
}

struct TailStudy {
  double s = 0;
  std::vector<int> thresholds;
  std::vector<double> max_ratio;
  bool strictly_decreasing = true;
};

/// Embedding ratios over fields supported on 2|j| + |k| > T, drawn at M = 2T.
/// On such fields |4j^2 - k^2| >= 2|j| + |k| > T, so the ratio should fall with T.
inline TailStudy embedding_tail_study(EnsembleSpec spec, double s, const std::vector<int>& thresholds) {
  TailStudy out{s, thresholds, {}, true};
  for (int T : thresholds) {
    if (T < 1) throw Error(ErrorCode::InvalidArgument, "tail threshold must be >= 1");
    spec.M = 2 * T;
    std::vector<double> ratios(static_cast<std::size_t>(spec.size));
    parallel_for(ratios.size(), [&](std::size_t i) {
      SpectralField u = spec.field(static_cast<int>(i));
      u.transform([&](ModeIndex m, complex& c) {
        if (m.weight() <= T) c = 0;
      });
      ratios[i] = embedding_ratio(u, s, spec.oversample);
    });
    out.max_ratio.push_back(*std::max_element(ratios.begin(), ratios.end()));
  }
  for (std::size_t i = 1; i < out.max_ratio.size(); ++i)
    if (!(out.max_ratio[i] < out.max_ratio[i - 1])) out.strictly_decreasing = false;
  return out;
}

inline constexpr double kHausdorffYoungTol = 1e-6;

/// ||u^||_{l^q} / ||u||_{L^p, normalized}; never above 1 for 1 < p <= 2.
inline double hausdorff_young_ratio(const SpectralField& u, double p, double oversample = kDefaultOversample) {
  return norm_lq(u, p / (p - 1)) / norm_Lp(u, p, oversample, Measure::Normalized);
}

inline InequalityReport check_hausdorff_young(const EnsembleSpec& spec, double p) {
  if (!(p > 1 && p <= 2)) throw Error(ErrorCode::InvalidArgument, "Hausdorff-Young needs 1 < p <= 2");
  return detail::run_ensemble(
      "hausdorff_young", spec, {{"p", p}, {"q", p / (p - 1)}},
      [&](const SpectralField& u) { return hausdorff_young_ratio(u, p, spec.oversample); },
      1.0 + kHausdorffYoungTol);
}

/// Largest quadrant H^{gamma'} norm (ell1 convention) over holder_estimate(u, gamma).
/// NaN when the four quadrant norms fail to add up (in squares) to the norm of u,
/// which the ensemble check counts as a violation.
inline double holder_to_sobolev_ratio(const SpectralField& u, double gamma, double gamma_prime,
                                      double oversample = kDefaultOversample) {
  const auto q = quadrant_split(u);
  double sum_sq = 0, largest = 0;
  for (const auto* part : q.all()) {
    const double n = sobolev_norm(*part, gamma_prime, SobolevConvention::Ell1);
    sum_sq += n * n;
    largest = std::max(largest, n);
  }
  const double full = sobolev_norm(u, gamma_prime, SobolevConvention::Ell1);
  if (std::abs(sum_sq - full * full) > 1e-12 * full * full) return std::numeric_limits<double>::quiet_NaN();
  return largest / holder_estimate(u, gamma, oversample);
}

inline InequalityReport check_holder_to_sobolev(const EnsembleSpec& spec, double gamma, double gamma_prime) {
  if (!(gamma_prime > 0 && gamma_prime < gamma && gamma < 1))
    throw Error(ErrorCode::InvalidArgument, "need 0 < gamma' < gamma < 1");
  return detail::run_ensemble("holder_to_sobolev", spec, {{"gamma", gamma}, {"gamma_prime", gamma_prime}},
                              [&](const SpectralField& u) {
                                return holder_to_sobolev_ratio(u, gamma, gamma_prime, spec.oversample);
                              });
}

/// holder_estimate(solve_box(f).w, gamma) / ||f^||_{l^q}, q = p/(p-1).
inline double box_regularity_ratio(const SpectralField& f, double p, double gamma,
                                   double oversample = kDefaultOversample) {
  const auto w = solve_box(f).w;
  return holder_estimate(w, gamma, oversample) / norm_lq(f, p / (p - 1));
}

inline InequalityReport check_box_regularity(const EnsembleSpec& spec, double p, double gamma) {
  if (!(p > 1)) throw Error(ErrorCode::InvalidArgument, "box regularity needs p > 1");
  return detail::run_ensemble("box_regularity", spec, {{"p", p}, {"gamma", gamma}},
                              [&](const SpectralField& f) { return box_regularity_ratio(f, p, gamma, spec.oversample); });
}

/// ||apply_box(solve_box(f)) - f|| / ||f|| on an Eperp ensemble.
inline InequalityReport check_box_roundtrip(const EnsembleSpec& spec, double tol = 1e-12) {
  return detail::run_ensemble(
      "box_roundtrip", spec, {},
      [](const SpectralField& f) {
        const double n = f.l2_norm();
        return n == 0 ? 0.0 : (apply_box(solve_box(f).w) - f).l2_norm() / n;
      },
      tol);
}

inline InequalityReport check_h1_bound(const EnsembleSpec& spec) {
  return detail::run_ensemble("h1_bound", spec, {}, [](const SpectralField& f) { return h1_bound_ratio(f); },
                              1.0 + 1e-12);
}

// ---------------------------------------------------------------------------
// Manufactured solutions

struct MmsRow {
  int M = 0;
  double error_l2 = 0;
  double residual_norm = 0;
  int newton_iters = 0;
  double seconds = 0;
  std::string failure;  ///< empty when Newton converged
};

struct MmsTable {
  double decay = 0;
  double beta = 0;
  SpectralField target;
  std::vector<MmsRow> rows;

  /// Largest error ratio between consecutive converged rows.
  double worst_ratio() const {
    double worst = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
      worst = std::max(worst, rows[i].error_l2 / rows[i - 1].error_l2);
    return worst;
  }
};

struct MmsOptions {
  /// Scales the envelope. A unit-amplitude target under the default cubic
  /// nonlinearity sits outside the basin of Newton started from zero.
  double amplitude = 0.25;
  int sigma = 1;
  std::uint64_t seed = 4242;
  double oversample = kDefaultOversample;
  NewtonOptions newton{};
};

/// Target u* with envelope amplitude * exp(-d (2|j| + |k|)) and random phases at the largest
/// truncation; the forcing is the unforced residual at u*, so u* is an exact
/// root there. Every row solves from a cold (zero) seed.
template <PointwiseSource S>
MmsTable mms_run(const S& nl, double decay, const std::vector<int>& Ms, double beta, const MmsOptions& opt = {}) {
  if (Ms.empty()) throw Error(ErrorCode::InvalidArgument, "mms_run needs at least one truncation");
  if (!std::is_sorted(Ms.begin(), Ms.end()) || std::adjacent_find(Ms.begin(), Ms.end()) != Ms.end())
    throw Error(ErrorCode::InvalidArgument, "mms_run truncations must be strictly increasing");
  const int top = Ms.back();
  if (decay < 0) throw Error(ErrorCode::InvalidArgument, "mms decay must be >= 0");
  MmsTable table{decay, beta, opt.amplitude * random_field(opt.seed, top, SubspaceTag::All, decay), {}};
  PenalizedProblem<S> full{top, beta, opt.sigma, nl, std::nullopt, opt.oversample};
  const SpectralField forcing = residual(full, table.target);

  for (int M : Ms) {
    PenalizedProblem<S> p{M, beta, opt.sigma, nl, truncate(forcing, M), opt.oversample};
    MmsRow row;
    row.M = M;
    const auto t0 = std::chrono::steady_clock::now();
    SolutionState state;
    try {
      state = newton_solve(p, SpectralField(M), opt.newton);
    } catch (const NewtonFailure& e) {
      state = e.best();
      row.failure = e.what();
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    row.error_l2 = (state.u.resized(top) - table.target).l2_norm();
    row.residual_norm = state.residual_norm;
    row.newton_iters = state.newton_iters;
    table.rows.push_back(std::move(row));
  }
  return table;
}

// ---------------------------------------------------------------------------
// Beta-uniform bounds along a continuation trace

struct MonitoredQuantity {
  std::string name;
  std::vector<double> values;  ///< one per trace row
  double min = 0, max = 0;
  double ratio = 1;            ///< max / min, 1 for quantities that vanish along the trace
  bool flagged = false;
};

struct AprioriReport {
  double bound = 10;
  double zero_floor = 1e-10;
  std::vector<MonitoredQuantity> quantities;
  bool all_within() const {
    return std::none_of(quantities.begin(), quantities.end(), [](const auto& q) { return q.flagged; });
  }
};

/// Max/min ratios of the monitored norms across a trace. A quantity whose
/// largest value is below zero_floor vanishes identically (round-off only) and
/// gets ratio 1. Third derivatives are recomputed from the stored solutions.
inline AprioriReport apriori_monitor(const ContinuationTrace& trace, double bound = 10,
                                     double oversample = kDefaultOversample, double zero_floor = 1e-10) {
  if (trace.rows.empty()) throw Error(ErrorCode::InvalidArgument, "apriori_monitor needs a nonempty trace");
  AprioriReport rep{bound, zero_floor, {}};
  std::vector<MonitoredNorms> norms;
  if (trace.solutions.size() == trace.rows.size()) {
    for (const auto& u : trace.solutions) norms.push_back(monitored_norms(u, oversample));
  } else {
    for (const auto& r : trace.rows)
      norms.push_back({r.v_c0, r.v_t_l2, r.v_tt_l2, std::numeric_limits<double>::quiet_NaN(), r.w_h1, r.w_h2});
  }
  auto add = [&](std::string name, double MonitoredNorms::*field) {
    MonitoredQuantity q{std::move(name), {}, 0, 0, 1, false};
    for (const auto& n : norms) q.values.push_back(n.*field);
    if (std::any_of(q.values.begin(), q.values.end(), [](double v) { return std::isnan(v); })) return;
    const auto [lo, hi] = std::minmax_element(q.values.begin(), q.values.end());
    q.min = *lo;
    q.max = *hi;
    if (q.max <= zero_floor)
      q.ratio = 1;
    else
      q.ratio = q.min > 0 ? q.max / q.min : std::numeric_limits<double>::infinity();
    q.flagged = !(q.ratio <= bound);
    rep.quantities.push_back(std::move(q));
  };
  add("v_c0", &MonitoredNorms::v_c0);
  add("v_t_l2", &MonitoredNorms::v_t_l2);
  add("v_tt_l2", &MonitoredNorms::v_tt_l2);
  add("v_ttt_l2", &MonitoredNorms::v_ttt_l2);
  add("w_h1", &MonitoredNorms::w_h1);
  add("w_h2", &MonitoredNorms::w_h2);
  return rep;
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::json to_json(const RatioSummary& s) {
  return {{"max", s.max}, {"mean", s.mean}, {"q05", s.q05}, {"q50", s.q50}, {"q95", s.q95}};
}

inline nlohmann::json to_json(const InequalityReport& r) {
  return {{"name", r.name},
          {"ensemble_size", r.ensemble_size},
          {"parameters", r.parameters},
          {"ratios", to_json(r.ratios)},
          {"violation_count", r.violation_count}};
}

inline nlohmann::json to_json(const TailStudy& t) {
  return {{"s", t.s},
          {"thresholds", t.thresholds},
          {"max_ratio", t.max_ratio},
          {"strictly_decreasing", t.strictly_decreasing}};
}

inline nlohmann::json to_json(const MmsTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows)
    rows.push_back({{"M", r.M},
                    {"error_l2", r.error_l2},
                    {"residual_norm", r.residual_norm},
                    {"newton_iters", r.newton_iters},
                    {"failure", r.failure}});
  return {{"decay", t.decay}, {"beta", t.beta}, {"rows", rows}, {"worst_ratio", t.worst_ratio()}};
}

inline nlohmann::json to_json(const AprioriReport& r) {
  nlohmann::json qs = nlohmann::json::array();
  for (const auto& q : r.quantities)
    qs.push_back({{"name", q.name}, {"min", q.min}, {"max", q.max}, {"ratio", q.ratio}, {"flagged", q.flagged}});
  return {{"bound", r.bound}, {"zero_floor", r.zero_floor}, {"quantities", qs}, {"all_within", r.all_within()}};
}

inline nlohmann::json to_json(const NormReport& r) {
  return {{"name", r.name}, {"value", r.value}, {"params", r.params}, {"convention", r.convention}};
}

/// One line per trial: "trial,ratio".
inline std::string per_trial_csv(const InequalityReport& r) {
  std::string out = "trial,ratio\n";
  char buf[64];
  for (std::size_t i = 0; i < r.per_trial.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, r.per_trial[i]);
    out += buf;
  }
  return out;
}

}  // namespace wavetorus
