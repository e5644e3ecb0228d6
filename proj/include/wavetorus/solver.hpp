#pragma once

// Penalized Galerkin system on the truncated lattice 2|j|+|k| <= M.
//
// With u = w + v, w = P_perp u and v = P_N u, the residual is
//
//   R(j,k) = (4j^2 - k^2) w(j,k) - sigma f_M(j,k) - g(j,k)       off the kernel,
//   R(j,k) = -beta (k^2 + 1) v(j,k) - sigma f_M(j,k) - g(j,k)     on the kernel,
//
// i.e. box w = sigma P_perp f and beta (v_tt - v) = sigma P_N f, where f_M are
// the truncated pseudospectral coefficients of f(x,u) and g is an optional
// additive forcing. The functional
//
//   I(u) = 1/2 int (w_x^2 - w_t^2) - beta/2 int (v^2 + v_t^2) - sigma int F(x,u) - int g u
//
// is evaluated with the same quadrature, so its gradient under the pairing
// <a,b> = |Q| sum Re(a conj b) is exactly R.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "wavetorus/nonlinearity.hpp"
#include "wavetorus/norms.hpp"
#include "wavetorus/spectral_core.hpp"

namespace wavetorus {

/// A source term evaluated pointwise in (x, u).
template <class S>
concept PointwiseSource = requires(const S& src, double x, double u) {
  { src.f(x, u) } -> std::convertible_to<double>;
  { src.f_u(x, u) } -> std::convertible_to<double>;
  { src.F(x, u) } -> std::convertible_to<double>;
};

template <PointwiseSource Source = Nonlinearity>
struct PenalizedProblem {
  int M = 24;
  double beta = 1e-1;
  int sigma = 1;  ///< equation u_tt - u_xx = sigma f(x,u)
  Source nl;
  std::optional<SpectralField> forcing;
  double oversample = kDefaultOversample;

  void validate() const {
    if (M < 1) throw Error(ErrorCode::InvalidArgument, "truncation M must be >= 1");
    if (!(beta > 0)) throw Error(ErrorCode::InvalidArgument, "penalty beta must be > 0");
    if (sigma != 1 && sigma != -1) throw Error(ErrorCode::InvalidArgument, "sigma must be +1 or -1");
    if (!(oversample >= 2)) throw Error(ErrorCode::InvalidArgument, "oversample must be >= 2");
    if (forcing && forcing->truncation() > M) {
      bool outside = false;
      forcing->for_each_mode([&](ModeIndex m, complex c) {
        if (m.weight() > M && c != complex{}) outside = true;
      });
      if (outside) throw Error(ErrorCode::InvalidArgument, "forcing is not bandlimited to M");
    }
  }

  /// Samples per axis of the collocation grid: at least the oversampling
  /// factor and at least s+1 times the bandwidth (dealiasing of |u|^{s-1}u).
  int grid_size() const {
    double pad = oversample;
    if constexpr (requires { nl.growth_exponent(); }) pad = std::max(pad, nl.growth_exponent() + 1.0);
    return sample_count(M, pad);
  }

  /// Diagonal (linear) part of the residual at a mode.
  double diagonal(ModeIndex m) const noexcept {
    return m.resonant() ? -beta * (double(m.k) * m.k + 1.0) : m.symbol();
  }
};

/// Integral pairing |Q| sum Re(a conj b); equals int_Q a b for real fields.
inline double pairing(const SpectralField& a, const SpectralField& b) {
  double s = 0;
  a.for_each_mode([&](ModeIndex m, complex c) { s += (c * std::conj(b(m))).real(); });
  return kDomainMeasure * s;
}

namespace detail {

template <PointwiseSource S>
GridField collocate(const PenalizedProblem<S>& p, const SpectralField& u) {
  const int n = p.grid_size();
  return synthesize(u.truncation() == p.M ? u : u.resized(p.M), n, n);
}

template <class Fn>
GridField pointwise(const GridField& ug, Fn&& fn) {
  GridField out(ug.nx(), ug.nt());
  for (int a = 0; a < ug.nx(); ++a) {
    const double x = ug.x(a);
    for (int b = 0; b < ug.nt(); ++b) out(a, b) = fn(x, ug(a, b));
  }
  return out;
}

}  // namespace detail

/// Truncated pseudospectral coefficients of f(x,u).
template <PointwiseSource S>
SpectralField source_coefficients(const PenalizedProblem<S>& p, const SpectralField& u) {
  const auto ug = detail::collocate(p, u);
  return analyze(detail::pointwise(ug, [&](double x, double v) { return p.nl.f(x, v); }), p.M);
}

template <PointwiseSource S>
SpectralField residual(const PenalizedProblem<S>& p, const SpectralField& u) {
  const auto fhat = source_coefficients(p, u);
  const SpectralField uu = u.truncation() == p.M ? u : u.resized(p.M);
  SpectralField r(p.M);
  const double sigma = p.sigma;
  r.transform([&](ModeIndex m, complex& c) {
    c = p.diagonal(m) * uu(m) - sigma * fhat(m);
    if (p.forcing) c -= (*p.forcing)(m);
  });
  return r;
}

template <PointwiseSource S>
double functional_I(const PenalizedProblem<S>& p, const SpectralField& u) {
  const SpectralField uu = u.truncation() == p.M ? u : u.resized(p.M);
  double quadratic = 0, kernel = 0;
  uu.for_each_mode([&](ModeIndex m, complex c) {
    if (m.resonant())
      kernel += (double(m.k) * m.k + 1.0) * std::norm(c);
    else
      quadratic += m.symbol() * std::norm(c);
  });
  const auto ug = detail::collocate(p, uu);
  double f_integral = 0;
  for (int a = 0; a < ug.nx(); ++a) {
    const double x = ug.x(a);
    for (int b = 0; b < ug.nt(); ++b) f_integral += p.nl.F(x, ug(a, b));
  }
  f_integral *= kDomainMeasure / (static_cast<double>(ug.nx()) * ug.nt());
  double value = 0.5 * kDomainMeasure * quadratic - 0.5 * p.beta * kDomainMeasure * kernel -
                 p.sigma * f_integral;
  if (p.forcing) value -= pairing(*p.forcing, uu);
  return value;
}

/// |I(u) - (sigma int (u f/2 - F) - <g,u>/2)|. Since I(u) - <R(u),u>/2 equals the
/// bracket identically, the gap vanishes at every root of the residual.
template <PointwiseSource S>
double critical_identity_gap(const PenalizedProblem<S>& p, const SpectralField& u) {
  const SpectralField uu = u.truncation() == p.M ? u : u.resized(p.M);
  const auto ug = detail::collocate(p, uu);
  double bracket = 0;
  for (int a = 0; a < ug.nx(); ++a) {
    const double x = ug.x(a);
    for (int b = 0; b < ug.nt(); ++b) {
      const double v = ug(a, b);
      bracket += 0.5 * v * p.nl.f(x, v) - p.nl.F(x, v);
    }
  }
  bracket *= kDomainMeasure / (static_cast<double>(ug.nx()) * ug.nt());
  double rhs = p.sigma * bracket;
  if (p.forcing) rhs -= 0.5 * pairing(*p.forcing, uu);
  return std::abs(functional_I(p, uu) - rhs);
}

/// Real coordinates of a Hermitian field: [Re u(0,0), Re u(h1), Im u(h1), ...]
/// over the half-lattice h (k > 0, or k = 0 and j > 0).
class HermitianLayout {
 public:
  explicit HermitianLayout(int M) : M_(M) {
    SpectralField(M).for_each_mode([&](ModeIndex m, complex) {
      if (m.k > 0 || (m.k == 0 && m.j > 0)) half_.push_back(m);
    });
  }

  int truncation() const noexcept { return M_; }
  Eigen::Index dof() const noexcept { return 1 + 2 * static_cast<Eigen::Index>(half_.size()); }
  const std::vector<ModeIndex>& half_modes() const noexcept { return half_; }

  Eigen::VectorXd pack(const SpectralField& u) const {
    Eigen::VectorXd z(dof());
    z[0] = u(0, 0).real();
    for (std::size_t i = 0; i < half_.size(); ++i) {
      const complex c = u(half_[i]);
      z[2 * i + 1] = c.real();
      z[2 * i + 2] = c.imag();
    }
    return z;
  }

  SpectralField unpack(const Eigen::VectorXd& z) const {
    SpectralField u(M_);
    u.at(0, 0) = z[0];
    for (std::size_t i = 0; i < half_.size(); ++i) {
      const complex c{z[2 * i + 1], z[2 * i + 2]};
      u.at(half_[i]) = c;
      u.at(-half_[i]) = std::conj(c);
    }
    return u;
  }

 private:
  int M_;
  std::vector<ModeIndex> half_;
};

/// Normalized DFT of f_u(x,u) on the collocation grid (all n x n coefficients).
template <PointwiseSource S>
struct LinearizedSource {
  int n = 0;
  std::vector<complex> coeffs;

  complex operator()(int dj, int dk) const {
    return coeffs[static_cast<std::size_t>(detail::wrap(dj, n)) * n + detail::wrap(dk, n)];
  }
};

template <PointwiseSource S>
LinearizedSource<S> linearize_source(const PenalizedProblem<S>& p, const SpectralField& u) {
  const auto ug = detail::collocate(p, u);
  const int n = ug.nx();
  LinearizedSource<S> g{n, std::vector<complex>(static_cast<std::size_t>(n) * n)};
  for (int a = 0; a < n; ++a) {
    const double x = ug.x(a);
    for (int b = 0; b < n; ++b) g.coeffs[static_cast<std::size_t>(a) * n + b] = p.nl.f_u(x, ug(a, b));
  }
  fft::dft2(g.coeffs, n, n, FFTW_FORWARD);
  const double scale = 1.0 / (static_cast<double>(n) * n);
  for (auto& c : g.coeffs) c *= scale;
  return g;
}

/// Dense Jacobian of the packed residual with respect to the packed field.
template <PointwiseSource S>
Eigen::MatrixXd jacobian(const PenalizedProblem<S>& p, const SpectralField& u,
                         const HermitianLayout& layout) {
  const auto g = linearize_source(p, u);
  const auto& half = layout.half_modes();
  const Eigen::Index n = layout.dof();
  const double sigma = p.sigma;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);

  // Column for the (0,0) coordinate: d R(h) = -sigma g(h).
  J(0, 0) = p.diagonal({0, 0}) - sigma * g(0, 0).real();
  for (std::size_t r = 0; r < half.size(); ++r) {
    const complex c = -sigma * g(half[r].j, half[r].k);
    J(2 * r + 1, 0) = c.real();
    J(2 * r + 2, 0) = c.imag();
  }
  for (std::size_t col = 0; col < half.size(); ++col) {
    const ModeIndex hc = half[col];
    const Eigen::Index cre = 2 * col + 1, cim = 2 * col + 2;
    // Row (0,0): real part only.
    {
      const complex plus = g(hc.j, hc.k), minus = g(-hc.j, -hc.k);
      J(0, cre) = (-sigma * (minus + plus)).real();
      J(0, cim) = (-sigma * complex(0, 1) * (minus - plus)).real();
    }
    for (std::size_t row = 0; row < half.size(); ++row) {
      const ModeIndex hr = half[row];
      const complex diff = g(hr.j - hc.j, hr.k - hc.k);
      const complex sum = g(hr.j + hc.j, hr.k + hc.k);
      const complex d_re = -sigma * (diff + sum);
      const complex d_im = -sigma * complex(0, 1) * (diff - sum);
      J(2 * row + 1, cre) = d_re.real();
      J(2 * row + 2, cre) = d_re.imag();
      J(2 * row + 1, cim) = d_im.real();
      J(2 * row + 2, cim) = d_im.imag();
    }
    const double d = p.diagonal(hc);
    J(cre, cre) += d;
    J(cim, cim) += d;
  }
  return J;
}

/// Jacobian-vector product through the collocation grid (no assembly).
template <PointwiseSource S>
Eigen::VectorXd jacobian_apply(const PenalizedProblem<S>& p, const GridField& fu_grid,
                               const HermitianLayout& layout, const Eigen::VectorXd& dz) {
  const SpectralField du = layout.unpack(dz);
  const int n = fu_grid.nx();
  GridField prod = synthesize(du, n, n);
  for (std::size_t i = 0; i < prod.values().size(); ++i) prod.values()[i] *= fu_grid.values()[i];
  const auto fhat = analyze(prod, p.M);
  SpectralField out(p.M);
  const double sigma = p.sigma;
  out.transform([&](ModeIndex m, complex& c) { c = p.diagonal(m) * du(m) - sigma * fhat(m); });
  return layout.pack(out);
}

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 40;
  bool line_search = true;
  /// Dense direct solves up to this many real unknowns (M = 64 has 4225).
  Eigen::Index dense_max_dof = 4300;
  double krylov_rtol = 1e-12;
  int krylov_restart = 80;
  int krylov_max_iter = 2000;
  /// Give up early when the best residual has not halved over this many
  /// iterations (0 disables).
  int stall_window = 15;
  /// Time translates of a t-dependent solution of an unforced problem are
  /// solutions too, so u_t spans a null direction of the Jacobian there. When
  /// the dense factorization is singular, retry with the phase condition
  /// <du, u_t> = 0 bordered on.
  bool phase_condition = true;
};

struct SolutionState {
  SpectralField u;
  double residual_norm = std::numeric_limits<double>::infinity();
  double I_value = 0;
  int newton_iters = 0;
  std::vector<double> residual_trace;
};

/// Newton failure; carries the best iterate seen and its residual trace.
class NewtonFailure : public Error {
 public:
  NewtonFailure(ErrorCode code, const std::string& what, SolutionState best)
      : Error(code, what), best_(std::move(best)) {}
  const SolutionState& best() const noexcept { return best_; }

 private:
  SolutionState best_;
};

namespace detail {

// Restarted GMRES with right preconditioning by a diagonal.
template <class Apply>
Eigen::VectorXd gmres(Apply&& apply, const Eigen::VectorXd& rhs, const Eigen::VectorXd& inv_diag,
                      double rtol, int restart, int max_iter) {
  const Eigen::Index n = rhs.size();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  const double bnorm = rhs.norm();
  if (bnorm == 0) return x;
  int total = 0;
  while (total < max_iter) {
    Eigen::VectorXd r = rhs - apply(x);
    double beta = r.norm();
    if (beta <= rtol * bnorm) break;
    const int m = restart;
    Eigen::MatrixXd V(n, m + 1);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
    Eigen::VectorXd cs = Eigen::VectorXd::Zero(m), sn = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(m + 1);
    e[0] = beta;
    V.col(0) = r / beta;
    int k = 0;
    for (; k < m && total < max_iter; ++k, ++total) {
      Eigen::VectorXd w = apply(inv_diag.cwiseProduct(V.col(k)));
      for (int i = 0; i <= k; ++i) {
        H(i, k) = V.col(i).dot(w);
        w -= H(i, k) * V.col(i);
      }
      H(k + 1, k) = w.norm();
      if (H(k + 1, k) > 0) V.col(k + 1) = w / H(k + 1, k);
      for (int i = 0; i < k; ++i) {
        const double tmp = cs[i] * H(i, k) + sn[i] * H(i + 1, k);
        H(i + 1, k) = -sn[i] * H(i, k) + cs[i] * H(i + 1, k);
        H(i, k) = tmp;
      }
      const double denom = std::hypot(H(k, k), H(k + 1, k));
      cs[k] = denom == 0 ? 1.0 : H(k, k) / denom;
      sn[k] = denom == 0 ? 0.0 : H(k + 1, k) / denom;
      H(k, k) = denom;
      H(k + 1, k) = 0;
      e[k + 1] = -sn[k] * e[k];
      e[k] = cs[k] * e[k];
      if (std::abs(e[k + 1]) <= rtol * bnorm) {
        ++k;
        ++total;
        break;
      }
    }
    Eigen::VectorXd y = H.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(e.head(k));
    x += inv_diag.cwiseProduct(V.leftCols(k) * y);
    if (std::abs(e[k]) <= rtol * bnorm) break;
  }
  return x;
}

}  // namespace detail

/// Damped Newton iteration on the packed residual. Throws NewtonFailure with
/// code NoConvergence or SingularJacobian.
template <PointwiseSource S>
SolutionState newton_solve(const PenalizedProblem<S>& p, const SpectralField& seed,
                           const NewtonOptions& opt = {}) {
  p.validate();
  if (!(opt.tol > 0)) throw Error(ErrorCode::InvalidArgument, "newton tol must be > 0");
  const HermitianLayout layout(p.M);
  SpectralField u = seed.truncation() == p.M ? seed : seed.resized(p.M);
  u.symmetrize();

  SolutionState state;
  state.u = u;
  auto r = residual(p, u);
  double rnorm = r.l2_norm();
  state.residual_norm = rnorm;
  state.residual_trace.push_back(rnorm);
  SolutionState best = state;

  auto finish = [&](SolutionState s) {
    s.I_value = functional_I(p, s.u);
    return s;
  };

  for (int it = 0; it < opt.max_iter && rnorm > opt.tol; ++it) {
    Eigen::VectorXd rz = layout.pack(r);
    Eigen::VectorXd step;
    if (layout.dof() <= opt.dense_max_dof) {
      const Eigen::MatrixXd J = jacobian(p, u, layout);
      auto conditioning = [](const Eigen::PartialPivLU<Eigen::MatrixXd>& lu) {
        // rcond() is an estimate and can miss exactly vanishing pivots.
        const Eigen::VectorXd pivots = lu.matrixLU().diagonal().cwiseAbs();
        return std::min(lu.rcond(), pivots.minCoeff() / std::max(pivots.maxCoeff(), 1e-300));
      };
      const double singular_below = 1e3 * std::numeric_limits<double>::epsilon();
      Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
      double cond = conditioning(lu);
      if (cond > singular_below) {
        step = lu.solve(-rz);
      } else if (opt.phase_condition && !p.forcing) {
        // Retry on the bordered system [J t; t' 0] with t = u_t.
        SpectralField ut = u;
        ut.transform([](ModeIndex m, complex& c) { c *= complex(0, m.k); });
        Eigen::VectorXd t = layout.pack(ut);
        const Eigen::Index n = layout.dof();
        if (t.norm() > 1e-8 * (1 + layout.pack(u).norm())) {
          t.normalize();
          const double scale = J.cwiseAbs().maxCoeff();
          Eigen::MatrixXd B(n + 1, n + 1);
          B.topLeftCorner(n, n) = J;
          B.col(n).head(n) = scale * t;
          B.row(n).head(n) = scale * t.transpose();
          B(n, n) = 0;
          Eigen::PartialPivLU<Eigen::MatrixXd> blu(B);
          cond = conditioning(blu);
          if (cond > singular_below) {
            Eigen::VectorXd rhs(n + 1);
            rhs << -rz, 0.0;
            step = blu.solve(rhs).head(n);
          }
        }
      }
      if (step.size() == 0) {
        best.newton_iters = it;
        throw NewtonFailure(ErrorCode::SingularJacobian,
                            "Jacobian is numerically singular (rcond " + std::to_string(cond) +
                                ") at beta=" + std::to_string(p.beta),
                            finish(best));
      }
    } else {
      const auto ug = detail::collocate(p, u);
      const auto fu = detail::pointwise(ug, [&](double x, double v) { return p.nl.f_u(x, v); });
      double mean_fu = 0;
      for (double v : fu.values()) mean_fu += v;
      mean_fu /= static_cast<double>(fu.values().size());
      Eigen::VectorXd inv_diag(layout.dof());
      auto fill = [&](Eigen::Index i, ModeIndex m) {
        const double d = p.diagonal(m) - p.sigma * mean_fu;
        inv_diag[i] = std::abs(d) > 1e-12 ? 1.0 / d : 1.0;
      };
      fill(0, {0, 0});
      for (std::size_t i = 0; i < layout.half_modes().size(); ++i) {
        fill(2 * i + 1, layout.half_modes()[i]);
        fill(2 * i + 2, layout.half_modes()[i]);
      }
      step = detail::gmres([&](const Eigen::VectorXd& v) { return jacobian_apply(p, fu, layout, v); },
                           -rz, inv_diag, opt.krylov_rtol, opt.krylov_restart, opt.krylov_max_iter);
    }
    const SpectralField du = layout.unpack(step);

    double lambda = 1.0;
    SpectralField trial = u + du;
    auto trial_r = residual(p, trial);
    double trial_norm = trial_r.l2_norm();
    if (opt.line_search) {
      while (!(trial_norm <= (1.0 - 1e-4 * lambda) * rnorm) && lambda > 1.0 / 1024) {
        lambda *= 0.5;
        trial = u + lambda * du;
        trial_r = residual(p, trial);
        trial_norm = trial_r.l2_norm();
      }
    }
    if (!std::isfinite(trial_norm)) {
      best.newton_iters = it + 1;
      throw NewtonFailure(ErrorCode::NoConvergence, "Newton step produced a non-finite residual",
                          finish(best));
    }
    u = std::move(trial);
    r = std::move(trial_r);
    rnorm = trial_norm;
    state.residual_trace.push_back(rnorm);
    state.newton_iters = it + 1;
    if (rnorm < best.residual_norm) {
      best.u = u;
      best.residual_norm = rnorm;
    }
    best.newton_iters = state.newton_iters;
    best.residual_trace = state.residual_trace;
    const auto& tr = state.residual_trace;
    if (opt.stall_window > 0 && static_cast<int>(tr.size()) > opt.stall_window &&
        best.residual_norm > 0.5 * *std::min_element(tr.begin(), tr.end() - opt.stall_window))
      break;
  }
  state.u = u;
  state.residual_norm = rnorm;
  if (!(rnorm <= opt.tol))
    throw NewtonFailure(ErrorCode::NoConvergence,
                        "residual " + std::to_string(rnorm) + " above tolerance after " +
                            std::to_string(state.newton_iters) + " iterations",
                        finish(best));
  return finish(std::move(state));
}

/// Kernel and off-kernel quantities tracked along a continuation in beta.
struct MonitoredNorms {
  double v_c0 = 0;      ///< max |v| on the grid
  double v_t_l2 = 0;    ///< ||v_t||_{L^2(Q)}
  double v_tt_l2 = 0;
  double v_ttt_l2 = 0;
  double w_h1 = 0;      ///< aniso Sobolev norms of w
  double w_h2 = 0;
};

inline MonitoredNorms monitored_norms(const SpectralField& u, double oversample = kDefaultOversample) {
  const auto v = project(u, SubspaceTag::Kernel);
  const auto w = project(u, SubspaceTag::Eperp);
  MonitoredNorms out;
  out.v_c0 = norm_C0(v, oversample);
  double s1 = 0, s2 = 0, s3 = 0;
  v.for_each_mode([&](ModeIndex m, complex c) {
    const double k2 = double(m.k) * m.k;
    s1 += k2 * std::norm(c);
    s2 += k2 * k2 * std::norm(c);
    s3 += k2 * k2 * k2 * std::norm(c);
  });
  out.v_t_l2 = std::sqrt(kDomainMeasure * s1);
  out.v_tt_l2 = std::sqrt(kDomainMeasure * s2);
  out.v_ttt_l2 = std::sqrt(kDomainMeasure * s3);
  out.w_h1 = sobolev_norm(w, 1.0, SobolevConvention::Aniso);
  out.w_h2 = sobolev_norm(w, 2.0, SobolevConvention::Aniso);
  return out;
}

}  // namespace wavetorus
