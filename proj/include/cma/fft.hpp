#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "cma/grid.hpp"

namespace cma {

namespace detail {

struct FftwBufferDeleter {
  void operator()(void* p) const { fftw_free(p); }
};

template <class T>
using fftw_buffer = std::unique_ptr<T[], FftwBufferDeleter>;

template <class T>
fftw_buffer<T> fftw_alloc_buffer(long n) {
  return fftw_buffer<T>(static_cast<T*>(fftw_malloc(sizeof(T) * n)));
}

/// Cached r2c/c2r plan pair for one grid shape. Planning goes through a
/// global mutex (FFTW planning is not thread safe); execution uses the
/// new-array interface on per-call buffers and is safe concurrently.
class Plans {
 public:
  explicit Plans(const Grid3& g) : nx_(g.nx), ny_(g.ny), nz_(g.nz) {
    long nreal = static_cast<long>(nx_) * ny_ * nz_;
    long ncplx = spectrum_size();
    auto rbuf = fftw_alloc_buffer<double>(nreal);
    auto cbuf = fftw_alloc_buffer<fftw_complex>(ncplx);
    fwd_ = fftw_plan_dft_r2c_3d(nx_, ny_, nz_, rbuf.get(), cbuf.get(),
                                FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_c2r_3d(nx_, ny_, nz_, cbuf.get(), rbuf.get(),
                                FFTW_ESTIMATE);
  }
  ~Plans() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }
  Plans(const Plans&) = delete;
  Plans& operator=(const Plans&) = delete;

  long spectrum_size() const {
    return static_cast<long>(nx_) * ny_ * (nz_ / 2 + 1);
  }

  void forward(double* in, fftw_complex* out) const {
    fftw_execute_dft_r2c(fwd_, in, out);
  }
  void backward(fftw_complex* in, double* out) const {
    fftw_execute_dft_c2r(bwd_, in, out);
  }

  static const Plans& get(const Grid3& g) {
    static std::mutex mu;
    static std::map<std::array<int, 3>, std::unique_ptr<Plans>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::array<int, 3>{g.nx, g.ny, g.nz};
    auto it = cache.find(key);
    if (it == cache.end())
      it = cache.emplace(key, std::make_unique<Plans>(g)).first;
    return *it->second;
  }

 private:
  int nx_, ny_, nz_;
  fftw_plan fwd_;
  fftw_plan bwd_;
};

}  // namespace detail

/// Half-complex spectrum of a real field, normalized so that coefficients are
/// amplitudes of exp(i k.x) in the trigonometric interpolant.
struct Spectrum {
  Grid3 grid;
  std::vector<std::complex<double>> c;  // nx * ny * (nz/2+1), kz-fastest

  long index(int i, int j, int k) const {
    return (static_cast<long>(i) * grid.ny + j) * (grid.nz / 2 + 1) + k;
  }
};

inline Spectrum forward_fft(const Grid3& g, const std::vector<double>& values) {
  const auto& plans = detail::Plans::get(g);
  auto rbuf = detail::fftw_alloc_buffer<double>(g.size());
  auto cbuf = detail::fftw_alloc_buffer<fftw_complex>(plans.spectrum_size());
  std::copy(values.begin(), values.end(), rbuf.get());
  plans.forward(rbuf.get(), cbuf.get());
  Spectrum s{g, std::vector<std::complex<double>>(plans.spectrum_size())};
  const double scale = 1.0 / static_cast<double>(g.size());
  for (long i = 0; i < plans.spectrum_size(); ++i)
    s.c[i] = std::complex<double>(cbuf[i][0], cbuf[i][1]) * scale;
  return s;
}

inline std::vector<double> backward_fft(const Spectrum& s) {
  const auto& plans = detail::Plans::get(s.grid);
  auto rbuf = detail::fftw_alloc_buffer<double>(s.grid.size());
  auto cbuf = detail::fftw_alloc_buffer<fftw_complex>(plans.spectrum_size());
  for (long i = 0; i < plans.spectrum_size(); ++i) {
    cbuf[i][0] = s.c[i].real();
    cbuf[i][1] = s.c[i].imag();
  }
  plans.backward(cbuf.get(), rbuf.get());
  return std::vector<double>(rbuf.get(), rbuf.get() + s.grid.size());
}

/// Applies a per-mode complex factor. The callback receives physical
/// wavenumbers and whether each index sits on its Nyquist plane.
template <class Fn>
std::vector<double> spectral_map(const Grid3& g, const std::vector<double>& in,
                                 Fn&& factor) {
  Spectrum s = forward_fft(g, in);
  for (int i = 0; i < g.nx; ++i) {
    bool nqx = (i == g.nx / 2);
    for (int j = 0; j < g.ny; ++j) {
      bool nqy = (j == g.ny / 2);
      for (int k = 0; k <= g.nz / 2; ++k) {
        bool nqz = (k == g.nz / 2);
        s.c[s.index(i, j, k)] *=
            factor(g.kx(i), g.ky(j), g.kz(k), nqx, nqy, nqz);
      }
    }
  }
  return backward_fft(s);
}

}  // namespace cma
