#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wavetorus/solver.hpp"

namespace wavetorus {

struct BetaSchedule {
  double start = 1e-1;
  double factor = 0.5;
  double floor = 1e-6;

  void validate() const {
    if (!(factor > 0 && factor < 1))
      throw Error(ErrorCode::Schedule, "continuation factor must lie in (0,1), got " + std::to_string(factor));
    if (!(floor > 0)) throw Error(ErrorCode::Schedule, "beta floor must be > 0");
    if (!(start > floor)) throw Error(ErrorCode::Schedule, "beta start must exceed beta floor");
  }

  /// start, start*factor, ... down to floor; the last value is clamped to floor.
  std::vector<double> values() const {
    validate();
    std::vector<double> betas{start};
    while (betas.back() > floor) {
      double next = betas.back() * factor;
      if (next < floor * (1 + 1e-12)) next = floor;
      betas.push_back(next);
    }
    return betas;
  }
};

struct TraceRow {
  double beta = 0;
  double residual_norm = 0;
  double I_value = 0;
  double v_c0 = 0;
  double v_t_l2 = 0;
  double v_tt_l2 = 0;
  double w_h1 = 0;
  double w_h2 = 0;
};

struct ContinuationTrace {
  std::vector<TraceRow> rows;              ///< beta strictly decreasing
  std::vector<SpectralField> solutions;    ///< converged field per row
  std::vector<int> newton_iters;
  std::optional<double> stalled_at;        ///< beta at which Newton failed
  std::string failure;

  bool completed() const noexcept { return !stalled_at; }
};

/// Solves at schedule.start and walks beta down by `factor`, warm-starting each
/// Newton solve from the previous solution. A Newton failure ends the walk and
/// is reported as a stall; the rows computed so far are kept.
template <PointwiseSource S>
ContinuationTrace continuation_beta(PenalizedProblem<S> problem, const BetaSchedule& schedule,
                                    const SpectralField& seed, const NewtonOptions& newton = {}) {
  const auto betas = schedule.values();
  ContinuationTrace trace;
  SpectralField current = seed;
  for (double beta : betas) {
    problem.beta = beta;
    try {
      auto state = newton_solve(problem, current, newton);
      const auto mon = monitored_norms(state.u, problem.oversample);
      trace.rows.push_back({beta, state.residual_norm, state.I_value, mon.v_c0, mon.v_t_l2,
                            mon.v_tt_l2, mon.w_h1, mon.w_h2});
      trace.newton_iters.push_back(state.newton_iters);
      current = state.u;
      trace.solutions.push_back(std::move(state.u));
    } catch (const NewtonFailure& e) {
      trace.stalled_at = beta;
      trace.failure = std::string(to_string(ErrorCode::StallAt)) + "(" + std::to_string(beta) +
                      "): " + e.what();
      break;
    }
  }
  return trace;
}

}  // namespace wavetorus
