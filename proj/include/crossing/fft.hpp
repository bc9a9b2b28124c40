#pragma once

// Thin RAII layer over FFTW3 plus the momentum-space conventions used by
// the rest of the library.
//
// Convention: for a wave function on Grid1D (x_i = x_min + i dx) the
// momentum amplitude is
//     psi~(p_j) = dx / sqrt(2 pi hbar) * sum_i psi(x_i) exp(-i p_j x_i / hbar)
// with p_j = 2 pi hbar k_j / (n dx). Then sum |psi~|^2 dp = sum |psi|^2 dx.

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <mutex>
#include <numbers>
#include <span>
#include <vector>

#include "crossing/core.hpp"

namespace crossing {

namespace detail {
// The FFTW planner is not re-entrant; execution of an existing plan is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

/// Unnormalised in-place complex DFT of fixed length, forward and backward.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n) : n_(n) {
    buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n_));
    if (!buf_) throw std::bad_alloc();
    std::lock_guard lock(detail::fftw_planner_mutex());
    const int ni = static_cast<int>(n_);
    fwd_ = fftw_plan_dft_1d(ni, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_1d(ni, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }

  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  FftPlan(FftPlan&& o) noexcept : n_(o.n_), buf_(o.buf_), fwd_(o.fwd_), bwd_(o.bwd_) {
    o.buf_ = nullptr;
    o.fwd_ = o.bwd_ = nullptr;
  }
  FftPlan& operator=(FftPlan&&) = delete;

  ~FftPlan() {
    std::lock_guard lock(detail::fftw_planner_mutex());
    if (fwd_) fftw_destroy_plan(fwd_);
    if (bwd_) fftw_destroy_plan(bwd_);
    if (buf_) fftw_free(buf_);
  }

  std::size_t size() const noexcept { return n_; }

  /// X_k = sum_j x_j exp(-2 pi i jk/n)
  void forward(std::span<cplx> data) { run(fwd_, data); }
  /// x_j = sum_k X_k exp(+2 pi i jk/n)   (no 1/n factor)
  void backward(std::span<cplx> data) { run(bwd_, data); }

 private:
  void run(fftw_plan plan, std::span<cplx> data) {
    if (data.size() != n_) throw ConfigError("FftPlan: length mismatch");
    auto* b = reinterpret_cast<cplx*>(buf_);
    std::copy(data.begin(), data.end(), b);
    fftw_execute(plan);
    std::copy(b, b + n_, data.begin());
  }

  std::size_t n_;
  fftw_complex* buf_ = nullptr;
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
};

/// Signed FFT frequency index for bin k of an n-point transform.
inline long fft_index(std::size_t k, std::size_t n) noexcept {
  return k < n / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
}

/// Momenta p_k in FFT bin order.
inline std::vector<double> fft_momenta(const Grid1D& grid, double hbar) {
  const std::size_t n = grid.size();
  const double dp = 2.0 * std::numbers::pi * hbar / (static_cast<double>(n) * grid.dx());
  std::vector<double> p(n);
  for (std::size_t k = 0; k < n; ++k) p[k] = dp * static_cast<double>(fft_index(k, n));
  return p;
}

/// Momentum amplitudes sorted by ascending p.
struct MomentumAmplitudes {
  std::vector<double> p;
  std::vector<cplx> values;
  double dp = 0.0;

  double norm_squared() const {
    double s = 0.0;
    for (const auto& v : values) s += std::norm(v);
    return s * dp;
  }
  double mean() const {
    double s = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) s += p[k] * std::norm(values[k]);
    return s * dp / norm_squared();
  }
  double variance() const {
    const double mu = mean();
    double s = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      s += (p[k] - mu) * (p[k] - mu) * std::norm(values[k]);
    }
    return s * dp / norm_squared();
  }
};

/// psi~(p) on a momentum grid refined by zero padding: `padding` = 2 halves
/// the momentum spacing. `padding` must be a power of two.
inline MomentumAmplitudes momentum_amplitudes(const WaveFunction& psi,
                                              std::size_t padding = 1) {
  const std::size_t n = psi.size();
  const std::size_t big = n * padding;
  if (padding == 0 || (padding & (padding - 1)) != 0) {
    throw ConfigError("momentum_amplitudes: padding must be a power of two");
  }
  std::vector<cplx> buf(big, cplx{});
  std::copy(psi.values.begin(), psi.values.end(), buf.begin());
  FftPlan plan(big);
  plan.forward(buf);

  const double dx = psi.grid.dx();
  const double dp = 2.0 * std::numbers::pi * psi.hbar / (static_cast<double>(big) * dx);
  const double pref = dx / std::sqrt(2.0 * std::numbers::pi * psi.hbar);

  MomentumAmplitudes out;
  out.dp = dp;
  out.p.resize(big);
  out.values.resize(big);
  for (std::size_t j = 0; j < big; ++j) {
    // ascending order: bin index of the j-th smallest momentum
    const std::size_t k = (j + big / 2) % big;
    const double p = dp * static_cast<double>(fft_index(k, big));
    out.p[j] = p;
    // the sum runs over x_i = x_min + i dx; restore the x_min phase
    out.values[j] = pref * buf[k] * std::polar(1.0, -p * psi.grid.x_min() / psi.hbar);
  }
  return out;
}

}  // namespace crossing
