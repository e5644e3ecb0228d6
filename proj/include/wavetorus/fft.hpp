#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <span>
#include <tuple>
#include <vector>

#include "wavetorus/error.hpp"

namespace wavetorus::fft {

namespace detail {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are cached for the lifetime of the process.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int nx, int nt, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(nx, nt, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<std::complex<double>> scratch(static_cast<std::size_t>(nx) * nt);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_2d(nx, nt, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan) throw Error(ErrorCode::InvalidArgument, "FFTW could not plan a transform");
    plans_.emplace(key, plan);
    return plan;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

inline bool is_smooth(int n) {
  for (int p : {2, 3, 5, 7})
    while (n % p == 0) n /= p;
  return n == 1;
}

}  // namespace detail

/// Smallest even 7-smooth integer >= n.
inline int good_size(int n) {
  if (n < 2) n = 2;
  if (n % 2) ++n;
  while (!detail::is_smooth(n)) n += 2;
  return n;
}

/// Unnormalized in-place 2-D DFT of a row-major nx-by-nt array.
/// sign = FFTW_FORWARD (-1) computes sum x e^{-i...}, FFTW_BACKWARD (+1) the inverse sum.
inline void dft2(std::span<std::complex<double>> data, int nx, int nt, int sign) {
  if (data.size() != static_cast<std::size_t>(nx) * nt)
    throw Error(ErrorCode::InvalidArgument, "dft2: buffer size does not match grid");
  fftw_plan plan = detail::PlanCache::instance().get(nx, nt, sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace wavetorus::fft
