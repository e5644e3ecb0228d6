#pragma once

// Fields on Q = [0,pi] x [0,2pi] expanded in the modes e^{i(2jx + kt)}.
//
// A SpectralField of truncation M stores the coefficients u(j,k) for every
// lattice point with 2|j| + |k| <= M, normalized so that
//
//     u(x,t) = sum u(j,k) e^{i(2jx+kt)},   u(j,k) = (1/|Q|) int_Q u e^{-i(2jx+kt)},
//
// with |Q| = 2 pi^2. Real fields satisfy u(-j,-k) = conj u(j,k). Complex
// (non-Hermitian) fields are allowed; quadrant splitting produces them.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wavetorus/error.hpp"
#include "wavetorus/fft.hpp"

namespace wavetorus {

using complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
/// |Q| for Q = [0,pi] x [0,2pi].
inline constexpr double kDomainMeasure = 2.0 * kPi * kPi;

struct ModeIndex {
  int j = 0;  ///< spatial half-frequency (spatial frequency is 2j)
  int k = 0;  ///< temporal frequency

  constexpr int weight() const noexcept { return 2 * (j < 0 ? -j : j) + (k < 0 ? -k : k); }
  /// Symbol of the d'Alembertian d_tt - d_xx on e^{i(2jx+kt)}.
  constexpr double symbol() const noexcept {
    return 4.0 * double(j) * double(j) - double(k) * double(k);
  }
  constexpr bool resonant() const noexcept { return k == 2 * j || k == -2 * j; }
  constexpr ModeIndex operator-() const noexcept { return {-j, -k}; }
  friend constexpr bool operator==(ModeIndex, ModeIndex) = default;
};

/// Kernel N (|k| = 2|j|), Eplus (|k| > 2|j|), Eminus (|k| < 2|j|), Eperp = Eplus + Eminus.
enum class SubspaceTag { Kernel, Eplus, Eminus, Eperp, All };

constexpr bool in_subspace(ModeIndex m, SubspaceTag tag) noexcept {
  const int ak = m.k < 0 ? -m.k : m.k;
  const int a2j = 2 * (m.j < 0 ? -m.j : m.j);
  switch (tag) {
    case SubspaceTag::Kernel: return ak == a2j;
    case SubspaceTag::Eplus: return ak > a2j;
    case SubspaceTag::Eminus: return ak < a2j;
    case SubspaceTag::Eperp: return ak != a2j;
    case SubspaceTag::All: return true;
  }
  return false;
}

inline std::string to_string(SubspaceTag tag) {
  switch (tag) {
    case SubspaceTag::Kernel: return "N";
    case SubspaceTag::Eplus: return "Eplus";
    case SubspaceTag::Eminus: return "Eminus";
    case SubspaceTag::Eperp: return "Eperp";
    case SubspaceTag::All: return "All";
  }
  return "?";
}

class SpectralField {
 public:
  SpectralField() : SpectralField(0) {}

  explicit SpectralField(int truncation)
      : M_(checked(truncation)), J_(truncation / 2),
        coeffs_(static_cast<std::size_t>(2 * J_ + 1) * (2 * M_ + 1)) {}

  int truncation() const noexcept { return M_; }
  int max_j() const noexcept { return J_; }

  bool contains(int j, int k) const noexcept { return ModeIndex{j, k}.weight() <= M_; }
  bool contains(ModeIndex m) const noexcept { return m.weight() <= M_; }

  /// Coefficient at (j,k); zero for modes outside the truncation.
  complex operator()(int j, int k) const noexcept {
    return contains(j, k) ? coeffs_[offset(j, k)] : complex{};
  }
  complex operator()(ModeIndex m) const noexcept { return (*this)(m.j, m.k); }

  complex& at(int j, int k) {
    if (!contains(j, k))
      throw std::out_of_range("mode (" + std::to_string(j) + "," + std::to_string(k) +
                              ") outside truncation M=" + std::to_string(M_));
    return coeffs_[offset(j, k)];
  }
  complex& at(ModeIndex m) { return at(m.j, m.k); }

  /// Calls fn(ModeIndex, complex) for every lattice point in the truncation.
  template <class Fn>
  void for_each_mode(Fn&& fn) const {
    for (int j = -J_; j <= J_; ++j) {
      const int kmax = M_ - 2 * std::abs(j);
      for (int k = -kmax; k <= kmax; ++k) fn(ModeIndex{j, k}, coeffs_[offset(j, k)]);
    }
  }

  /// Calls fn(ModeIndex, complex&) for every lattice point in the truncation.
  template <class Fn>
  void transform(Fn&& fn) {
    for (int j = -J_; j <= J_; ++j) {
      const int kmax = M_ - 2 * std::abs(j);
      for (int k = -kmax; k <= kmax; ++k) fn(ModeIndex{j, k}, coeffs_[offset(j, k)]);
    }
  }

  std::size_t mode_count() const noexcept {
    std::size_t n = 0;
    for (int j = -J_; j <= J_; ++j) n += 2 * (M_ - 2 * std::abs(j)) + 1;
    return n;
  }

  double squared_l2_norm() const noexcept {
    double s = 0;
    for (const auto& c : coeffs_) s += std::norm(c);
    return s;
  }
  double l2_norm() const noexcept { return std::sqrt(squared_l2_norm()); }

  /// max |u(j,k) - conj u(-j,-k)| <= tol * (1 + l2 norm).
  bool is_hermitian(double tol = 1e-12) const noexcept {
    const double scale = tol * (1.0 + l2_norm());
    bool ok = true;
    for_each_mode([&](ModeIndex m, complex c) {
      if (std::abs(c - std::conj((*this)(-m))) > scale) ok = false;
    });
    return ok;
  }

  /// Replaces the field by its Hermitian part (u + conj u(-.,-.))/2.
  SpectralField& symmetrize() {
    SpectralField copy = *this;
    transform([&](ModeIndex m, complex& c) { c = 0.5 * (copy(m) + std::conj(copy(-m))); });
    return *this;
  }

  /// Same coefficients in a lattice of truncation M (drops or zero-pads modes).
  SpectralField resized(int M) const {
    SpectralField out(M);
    out.transform([&](ModeIndex m, complex& c) { c = (*this)(m); });
    return out;
  }

  SpectralField& operator+=(const SpectralField& o) {
    require_same(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  SpectralField& operator-=(const SpectralField& o) {
    require_same(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  SpectralField& operator*=(complex a) {
    for (auto& c : coeffs_) c *= a;
    return *this;
  }
  SpectralField& operator*=(double a) {
    for (auto& c : coeffs_) c *= a;
    return *this;
  }

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double a, SpectralField b) { return b *= a; }
  friend SpectralField operator*(complex a, SpectralField b) { return b *= a; }
  friend bool operator==(const SpectralField&, const SpectralField&) = default;

 private:
  static int checked(int truncation) {
    if (truncation < 0) throw Error(ErrorCode::InvalidArgument, "truncation must be >= 0");
    return truncation;
  }
  std::size_t offset(int j, int k) const noexcept {
    return static_cast<std::size_t>(j + J_) * (2 * M_ + 1) + static_cast<std::size_t>(k + M_);
  }
  void require_same(const SpectralField& o) const {
    if (o.M_ != M_) throw Error(ErrorCode::InvalidArgument, "fields have different truncations");
  }

  int M_;
  int J_;
  std::vector<complex> coeffs_;  // dense (2J+1) x (2M+1) box, zero outside the diamond
};

/// Samples of a field on the uniform grid x_a = pi a / nx, t_b = 2 pi b / nt.
template <class T>
class BasicGrid {
 public:
  BasicGrid() = default;
  BasicGrid(int nx, int nt, T fill = T{})
      : nx_(nx), nt_(nt), values_(static_cast<std::size_t>(nx) * nt, fill) {
    if (nx < 1 || nt < 1) throw Error(ErrorCode::InvalidArgument, "grid dimensions must be >= 1");
  }

  int nx() const noexcept { return nx_; }
  int nt() const noexcept { return nt_; }
  double x(int a) const noexcept { return kPi * a / nx_; }
  double t(int b) const noexcept { return 2.0 * kPi * b / nt_; }

  T& operator()(int a, int b) noexcept { return values_[static_cast<std::size_t>(a) * nt_ + b]; }
  const T& operator()(int a, int b) const noexcept {
    return values_[static_cast<std::size_t>(a) * nt_ + b];
  }

  std::span<T> values() noexcept { return values_; }
  std::span<const T> values() const noexcept { return values_; }

  /// Trapezoid (equivalently, midpoint) rule for int_Q g.
  template <class Fn>
  double integrate(Fn&& g) const {
    double s = 0;
    for (const auto& v : values_) s += g(v);
    return s * kDomainMeasure / static_cast<double>(values_.size());
  }

 private:
  int nx_ = 0;
  int nt_ = 0;
  std::vector<T> values_;
};

using GridField = BasicGrid<double>;
using ComplexGridField = BasicGrid<complex>;

/// Per-axis sample count for truncation M at oversampling factor q: q*(M+1)
/// rounded up to an FFT-friendly even size; q = 2 is the minimal 2M+2 grid.
inline int sample_count(int M, double oversample) {
  const int minimal = 2 * M + 2;
  const int requested = static_cast<int>(std::ceil(oversample * (M + 1) - 1e-9));
  return fft::good_size(std::max(minimal, requested));
}

namespace detail {

inline void require_resolution(int nx, int nt, int M) {
  if (nx < 2 * M + 2 || nt < 2 * M + 2)
    throw Error(ErrorCode::GridTooCoarse,
                "grid " + std::to_string(nx) + "x" + std::to_string(nt) +
                    " cannot resolve truncation M=" + std::to_string(M) + " (need >= " +
                    std::to_string(2 * M + 2) + " points per axis)");
}

inline int wrap(int i, int n) noexcept { return ((i % n) + n) % n; }

inline SpectralField gather(std::span<const complex> spectrum, int nx, int nt, int M) {
  const double scale = 1.0 / (static_cast<double>(nx) * nt);
  SpectralField u(M);
  u.transform([&](ModeIndex m, complex& c) {
    c = spectrum[static_cast<std::size_t>(wrap(m.j, nx)) * nt + wrap(m.k, nt)] * scale;
  });
  return u;
}

inline std::vector<complex> scatter(const SpectralField& u, int nx, int nt) {
  std::vector<complex> buf(static_cast<std::size_t>(nx) * nt);
  u.for_each_mode([&](ModeIndex m, complex c) {
    buf[static_cast<std::size_t>(wrap(m.j, nx)) * nt + wrap(m.k, nt)] = c;
  });
  return buf;
}

}  // namespace detail

/// Coefficients of the trigonometric interpolant of g, restricted to 2|j|+|k| <= M.
inline SpectralField analyze(const GridField& g, int M) {
  detail::require_resolution(g.nx(), g.nt(), M);
  std::vector<complex> buf(g.values().begin(), g.values().end());
  fft::dft2(buf, g.nx(), g.nt(), FFTW_FORWARD);
  return detail::gather(buf, g.nx(), g.nt(), M);
}

inline SpectralField analyze(const ComplexGridField& g, int M) {
  detail::require_resolution(g.nx(), g.nt(), M);
  std::vector<complex> buf(g.values().begin(), g.values().end());
  fft::dft2(buf, g.nx(), g.nt(), FFTW_FORWARD);
  return detail::gather(buf, g.nx(), g.nt(), M);
}

inline ComplexGridField synthesize_complex(const SpectralField& u, int nx, int nt) {
  detail::require_resolution(nx, nt, u.truncation());
  auto buf = detail::scatter(u, nx, nt);
  fft::dft2(buf, nx, nt, FFTW_BACKWARD);
  ComplexGridField g(nx, nt);
  std::copy(buf.begin(), buf.end(), g.values().begin());
  return g;
}

/// Real samples of u; for Hermitian u the discarded imaginary part is roundoff.
inline GridField synthesize(const SpectralField& u, int nx, int nt) {
  detail::require_resolution(nx, nt, u.truncation());
  auto buf = detail::scatter(u, nx, nt);
  fft::dft2(buf, nx, nt, FFTW_BACKWARD);
  GridField g(nx, nt);
  std::transform(buf.begin(), buf.end(), g.values().begin(), [](complex c) { return c.real(); });
  return g;
}

/// Zeroes every coefficient outside the tagged mode set.
inline SpectralField project(SpectralField u, SubspaceTag tag) {
  u.transform([&](ModeIndex m, complex& c) {
    if (!in_subspace(m, tag)) c = 0;
  });
  return u;
}

/// Keeps the modes with 2|j|+|k| <= M'; the result has truncation min(M, M').
inline SpectralField truncate(const SpectralField& u, int truncation) {
  if (truncation >= u.truncation()) return u;
  return u.resized(std::max(truncation, 0));
}

/// g_theta u = u(x, t + theta).
inline SpectralField time_translate(SpectralField u, double theta) {
  u.transform([&](ModeIndex m, complex& c) { c *= std::polar(1.0, m.k * theta); });
  return u;
}

/// Relative coefficient mass of u off (or on) a subspace.
inline double relative_mass(const SpectralField& u, SubspaceTag tag) {
  const double total = u.squared_l2_norm();
  if (total == 0) return 0;
  return std::sqrt(project(u, tag).squared_l2_norm() / total);
}

/// A pi-periodic series p(y) = sum_j c_j e^{2ijy}, |j| <= J.
struct PeriodicSeries {
  int J = 0;
  std::vector<complex> coeffs = std::vector<complex>(1);  // index j + J

  explicit PeriodicSeries(int max_j = 0) : J(max_j), coeffs(static_cast<std::size_t>(2 * max_j + 1)) {}

  complex& operator[](int j) { return coeffs.at(static_cast<std::size_t>(j + J)); }
  complex operator[](int j) const {
    return std::abs(j) > J ? complex{} : coeffs[static_cast<std::size_t>(j + J)];
  }

  complex operator()(double y) const {
    complex s{};
    for (int j = -J; j <= J; ++j) s += coeffs[static_cast<std::size_t>(j + J)] * std::polar(1.0, 2.0 * j * y);
    return s;
  }
};

struct KernelProfiles {
  PeriodicSeries p1;  ///< travels along x + t
  PeriodicSeries p2;  ///< travels along x - t
};

/// Writes a kernel field as v(x,t) = p1(x+t) + p2(x-t). The constant mode is
/// split equally between the two profiles.
inline KernelProfiles kernel_decompose(const SpectralField& v, double tol = 1e-12) {
  if (relative_mass(v, SubspaceTag::Eperp) > tol)
    throw Error(ErrorCode::NotInKernel, "field carries mass off the kernel of the d'Alembertian");
  const int J = v.max_j();
  KernelProfiles out{PeriodicSeries(J), PeriodicSeries(J)};
  for (int j = -J; j <= J; ++j) {
    if (j == 0) continue;
    out.p1[j] = v(j, 2 * j);
    out.p2[j] = v(j, -2 * j);
  }
  out.p1[0] = 0.5 * v(0, 0);
  out.p2[0] = 0.5 * v(0, 0);
  return out;
}

/// Inverse of kernel_decompose.
inline SpectralField kernel_reconstruct(const KernelProfiles& p, int M) {
  SpectralField v(M);
  for (int j = -v.max_j(); j <= v.max_j(); ++j) {
    if (j == 0) continue;
    if (v.contains(j, 2 * j)) v.at(j, 2 * j) = p.p1[j];
    if (v.contains(j, -2 * j)) v.at(j, -2 * j) = p.p2[j];
  }
  v.at(0, 0) = p.p1[0] + p.p2[0];
  return v;
}

/// Stateless 64-bit mixer (splitmix64 finalizer), used to derive independent
/// deterministic streams from (seed, index) pairs.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(master ^ mix64(index + 0x632be59bd9b4e019ULL));
}

/// Uniform double in [0,1) determined by the key.
constexpr double unit_uniform(std::uint64_t key) noexcept {
  return static_cast<double>(mix64(key) >> 11) * 0x1.0p-53;
}

/// Hermitian random field supported on `tag` with |u(j,k)| = exp(-decay (2|j|+|k|))
/// and uniformly random phases. Each coefficient depends only on (seed, j, k), so
/// random_field(seed, M', ...) equals truncate(random_field(seed, M, ...), M').
inline SpectralField random_field(std::uint64_t seed, int M, SubspaceTag tag, double decay) {
  if (decay < 0) throw Error(ErrorCode::InvalidArgument, "decay must be >= 0");
  SpectralField u(M);
  u.transform([&](ModeIndex m, complex& c) {
    if (!in_subspace(m, tag)) return;
    const bool upper = m.k > 0 || (m.k == 0 && m.j >= 0);
    const ModeIndex rep = upper ? m : -m;
    const std::uint64_t key =
        derive_seed(seed, (static_cast<std::uint64_t>(static_cast<std::uint32_t>(rep.j)) << 32) |
                              static_cast<std::uint32_t>(rep.k));
    const double magnitude = std::exp(-decay * m.weight());
    if (rep.j == 0 && rep.k == 0) {
      c = unit_uniform(key) < 0.5 ? -magnitude : magnitude;
      return;
    }
    const complex z = std::polar(magnitude, 2.0 * kPi * unit_uniform(key));
    c = upper ? z : std::conj(z);
  });
  return u;
}

}  // namespace wavetorus
