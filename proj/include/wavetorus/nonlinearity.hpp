#pragma once

// Admissible source terms f(x,u) = a(x)|u|^{s-1}u + m(u) + b(x).
//
// a and b are pi-periodic trigonometric polynomials so that products stay on
// the e^{2ijx} lattice. The bounded monotone part m(u) = B tanh(alpha u / B)
// supplies the strong-monotonicity floor f_u >= alpha_eff > 0 near u = 0,
// where the power term has vanishing derivative.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "wavetorus/error.hpp"
#include "wavetorus/spectral_core.hpp"

namespace wavetorus {

struct TrigTerm {
  int j = 0;
  double c = 0;      ///< coefficient of cos(2jx)
  double c_sin = 0;  ///< coefficient of sin(2jx)
};

/// p(x) = sum c cos(2jx) + c_sin sin(2jx).
class TrigPolynomial {
 public:
  TrigPolynomial() = default;
  explicit TrigPolynomial(std::vector<TrigTerm> terms) : terms_(std::move(terms)) {
    for (const auto& t : terms_)
      if (t.j < 0) throw Error(ErrorCode::InvalidArgument, "trig term index j must be >= 0");
  }

  static TrigPolynomial constant(double c) { return TrigPolynomial({{0, c, 0}}); }

  double operator()(double x) const noexcept {
    double v = 0;
    for (const auto& t : terms_) v += t.c * std::cos(2.0 * t.j * x) + t.c_sin * std::sin(2.0 * t.j * x);
    return v;
  }

  const std::vector<TrigTerm>& terms() const noexcept { return terms_; }
  int max_j() const noexcept {
    int j = 0;
    for (const auto& t : terms_) j = std::max(j, t.j);
    return j;
  }

  double min() const { return extremum(-1.0); }
  double max() const { return extremum(1.0); }

 private:
  // Dense sampling over one period followed by golden-section refinement
  // around the best sample.
  double extremum(double sign) const {
    if (terms_.empty()) return 0.0;
    const int n = 256 * (max_j() + 1);
    const double h = kPi / n;
    int best = 0;
    double best_v = sign * (*this)(0.0);
    for (int i = 1; i < n; ++i) {
      const double v = sign * (*this)(i * h);
      if (v > best_v) best_v = v, best = i;
    }
    double lo = (best - 1) * h, hi = (best + 1) * h;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 80; ++it) {
      const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
      if (sign * (*this)(a) > sign * (*this)(b)) hi = b; else lo = a;
    }
    return sign * std::max(best_v, sign * (*this)(0.5 * (lo + hi)));
  }

  std::vector<TrigTerm> terms_;
};

/// m(u) = bound * tanh(alpha u / bound): m'(0) = alpha, sup |m| = bound.
struct TanhPart {
  double alpha = 1.0;
  double bound = 1.0;
};

struct NonlinearitySpec {
  double s = 3.0;
  TrigPolynomial a = TrigPolynomial::constant(1.0);
  std::optional<TanhPart> m;
  TrigPolynomial b;
};

/// Constants of the growth sandwich
///   c01 |u|^{s-1}u + c11 <= f(x,u) <= c02 |u|^{s-1}u + c21   (u >= 0),
/// the monotonicity floor, and the coercivity pair
///   u f/2 - F >= a1 |u|^{s+1} - a2.
struct GrowthCertificate {
  double a_min = 0;
  double a_max = 0;
  double sup_m = 0;
  double c01 = 0;
  double c02 = 0;
  double c11 = 0;
  double c21 = 0;
  double alpha_eff = 0;
  double coercivity_a1 = 0;
  double coercivity_a2 = 0;
};

class Nonlinearity {
 public:
  const NonlinearitySpec& spec() const noexcept { return spec_; }
  const GrowthCertificate& certificate() const noexcept { return cert_; }
  double growth_exponent() const noexcept { return spec_.s; }

  double a(double x) const { return spec_.a(x); }
  double b(double x) const { return spec_.b(x); }

  double f(double x, double u) const {
    return spec_.a(x) * std::pow(std::abs(u), s_ - 1.0) * u + m(u) + spec_.b(x);
  }
  double f_u(double x, double u) const {
    return s_ * spec_.a(x) * std::pow(std::abs(u), s_ - 1.0) + m1(u);
  }
  double f_uu(double x, double u) const {
    return s_ * (s_ - 1.0) * spec_.a(x) * std::pow(std::abs(u), s_ - 3.0) * u + m2(u);
  }
  /// |u|^{s-3} is read as 1 when s = 3 (f_uuu = 6a for the cubic).
  double f_uuu(double x, double u) const {
    return s_ * (s_ - 1.0) * (s_ - 2.0) * spec_.a(x) * std::pow(std::abs(u), s_ - 3.0) + m3(u);
  }
  /// Antiderivative with F(x,0) = 0.
  double F(double x, double u) const {
    return spec_.a(x) * std::pow(std::abs(u), s_ + 1.0) / (s_ + 1.0) + m_int(u) + spec_.b(x) * u;
  }

  /// Pointwise f (order 0) or its u-derivatives up to order 3 on a grid.
  GridField eval(const GridField& u, int order) const {
    if (order < 0 || order > 3)
      throw Error(ErrorCode::OrderUnavailable, "derivative order " + std::to_string(order));
    GridField out(u.nx(), u.nt());
    for (int ia = 0; ia < u.nx(); ++ia) {
      const double x = u.x(ia);
      for (int ib = 0; ib < u.nt(); ++ib) {
        const double v = u(ia, ib);
        switch (order) {
          case 0: out(ia, ib) = f(x, v); break;
          case 1: out(ia, ib) = f_u(x, v); break;
          case 2: out(ia, ib) = f_uu(x, v); break;
          default: out(ia, ib) = f_uuu(x, v); break;
        }
      }
    }
    return out;
  }

  GridField eval_F(const GridField& u) const {
    GridField out(u.nx(), u.nt());
    for (int ia = 0; ia < u.nx(); ++ia)
      for (int ib = 0; ib < u.nt(); ++ib) out(ia, ib) = F(u.x(ia), u(ia, ib));
    return out;
  }

 private:
  friend Nonlinearity make_nonlinearity(const NonlinearitySpec& spec);

  explicit Nonlinearity(NonlinearitySpec spec) : spec_(std::move(spec)), s_(spec_.s) {}

  double m(double u) const {
    if (!spec_.m) return 0;
    return spec_.m->bound * std::tanh(spec_.m->alpha * u / spec_.m->bound);
  }
  double m1(double u) const {
    if (!spec_.m) return 0;
    const double sech = 1.0 / std::cosh(spec_.m->alpha * u / spec_.m->bound);
    return spec_.m->alpha * sech * sech;
  }
  double m2(double u) const {
    if (!spec_.m) return 0;
    const double z = spec_.m->alpha * u / spec_.m->bound;
    const double sech = 1.0 / std::cosh(z);
    return -2.0 * spec_.m->alpha * (spec_.m->alpha / spec_.m->bound) * sech * sech * std::tanh(z);
  }
  double m3(double u) const {
    if (!spec_.m) return 0;
    const double z = spec_.m->alpha * u / spec_.m->bound;
    const double sech = 1.0 / std::cosh(z);
    const double th = std::tanh(z);
    const double r = spec_.m->alpha / spec_.m->bound;
    return -2.0 * spec_.m->alpha * r * r * sech * sech * (1.0 - 3.0 * th * th);
  }
  // B^2/alpha log cosh(alpha u / B), evaluated without overflow.
  double m_int(double u) const {
    if (!spec_.m) return 0;
    const double z = std::abs(spec_.m->alpha * u / spec_.m->bound);
    const double logcosh = z + std::log1p(std::exp(-2.0 * z)) - std::log(2.0);
    return spec_.m->bound * spec_.m->bound / spec_.m->alpha * logcosh;
  }

  NonlinearitySpec spec_;
  double s_;
  GrowthCertificate cert_;
};

namespace detail {

// inf_{u >= 0} s a_min u^{s-1} + alpha sech^2(alpha u / B). Beyond
// u_cap the power term alone exceeds alpha, so the infimum lies in [0, u_cap].
inline double monotonicity_floor(double s, double a_min, const TanhPart& m) {
  auto h = [&](double u) {
    const double sech = 1.0 / std::cosh(m.alpha * u / m.bound);
    return s * a_min * std::pow(u, s - 1.0) + m.alpha * sech * sech;
  };
  const double u_cap = std::pow(m.alpha / (s * a_min), 1.0 / (s - 1.0));
  const int n = 4000;
  double best = h(0.0);
  int best_i = 0;
  for (int i = 1; i <= n; ++i) {
    const double v = h(u_cap * i / n);
    if (v < best) best = v, best_i = i;
  }
  double lo = u_cap * std::max(best_i - 1, 0) / n, hi = u_cap * std::min(best_i + 1, n) / n;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 80; ++it) {
    const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
    if (h(a) < h(b)) hi = b; else lo = a;
  }
  return std::min(best, h(0.5 * (lo + hi)));
}

}  // namespace detail

/// Validates the growth and monotonicity hypotheses and derives the certificate.
/// Throws SmoothnessExponent, NonpositiveLeading, RatioCondition or NoMonotoneFloor.
inline Nonlinearity make_nonlinearity(const NonlinearitySpec& spec) {
  if (!(spec.s >= 3.0))
    throw Error(ErrorCode::SmoothnessExponent, "growth exponent s must be >= 3 for f in C^2");
  GrowthCertificate cert;
  cert.a_min = spec.a.min();
  cert.a_max = spec.a.max();
  if (!(cert.a_min > 0))
    throw Error(ErrorCode::NonpositiveLeading,
                "leading coefficient a(x) has minimum " + std::to_string(cert.a_min));
  if (!(cert.a_min > cert.a_max / (spec.s + 1.0)))
    throw Error(ErrorCode::RatioCondition, "min a = " + std::to_string(cert.a_min) +
                                               " must exceed max a / (s+1) = " +
                                               std::to_string(cert.a_max / (spec.s + 1.0)));
  if (!spec.m)
    throw Error(ErrorCode::NoMonotoneFloor,
                "f_u vanishes at u = 0 without a monotone part; strong monotonicity fails");
  if (!(spec.m->alpha > 0) || !(spec.m->bound > 0))
    throw Error(ErrorCode::InvalidArgument, "tanh part needs alpha > 0 and bound > 0");

  cert.sup_m = spec.m->bound;
  cert.c01 = cert.a_min;
  cert.c02 = cert.a_max;
  const double b_min = spec.b.terms().empty() ? 0.0 : spec.b.min();
  const double b_max = spec.b.terms().empty() ? 0.0 : spec.b.max();
  cert.c11 = b_min - cert.sup_m;
  cert.c21 = b_max + cert.sup_m;
  cert.alpha_eff = detail::monotonicity_floor(spec.s, cert.a_min, *spec.m);

  // u f/2 - F = a (1/2 - 1/(s+1)) |u|^{s+1} + (u m/2 - M(u)) - b u/2, and the
  // last two terms are bounded below by -L |u| with L = 3 sup|m| / 2 + max|b| / 2.
  // Half of the power coefficient absorbs the linear part.
  const double s = spec.s;
  const double lead = cert.a_min * (0.5 - 1.0 / (s + 1.0));
  const double lin = 1.5 * cert.sup_m + 0.5 * std::max(std::abs(b_min), std::abs(b_max));
  cert.coercivity_a1 = 0.5 * lead;
  const double r_star = std::pow(lin / (cert.coercivity_a1 * (s + 1.0)), 1.0 / s);
  cert.coercivity_a2 = lin * r_star - cert.coercivity_a1 * std::pow(r_star, s + 1.0);

  Nonlinearity nl(spec);
  nl.cert_ = cert;
  return nl;
}

/// The reference problem's source term: s = 3, a(x) = 1 + sin(2x)/2, m = tanh(u), b = 0.
inline NonlinearitySpec default_cubic_spec() {
  NonlinearitySpec spec;
  spec.s = 3.0;
  spec.a = TrigPolynomial({{0, 1.0, 0.0}, {1, 0.0, 0.5}});
  spec.m = TanhPart{1.0, 1.0};
  return spec;
}

}  // namespace wavetorus
