#pragma once

#include <fftw3.h>

#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "mhdlab/field.hpp"
#include "mhdlab/grid.hpp"

namespace mhdlab {

// Physical-space sample values of one field component, in the same
// row-major layout as the spectral storage (x_j = 2pi j / N).
using PhysicalComponent = std::vector<double>;

namespace detail {

// One pair of c2c plans per grid, with private aligned buffers.  Plans are
// FFTW_ESTIMATE so planning is deterministic across runs.
class FftPlans {
 public:
  explicit FftPlans(const TorusGrid& g) : vol_(g.size()) {
    buf_ = fftw_alloc_complex(vol_);
    int dims[3] = {g.N, g.N, g.N};
    fwd_ = fftw_plan_dft(g.n, dims, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft(g.n, dims, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }

  ~FftPlans() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(buf_);
  }

  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  // coefficients -> physical samples (real part; imaginary part of a
  // conjugate-symmetric input is roundoff noise)
  void inverse(const cplx* in, double* out) {
    auto* b = reinterpret_cast<cplx*>(buf_);
    std::copy(in, in + vol_, b);
    fftw_execute(bwd_);
    for (std::size_t i = 0; i < vol_; ++i) out[i] = b[i].real();
  }

  // physical samples -> coefficients, normalized so that the k = 0
  // coefficient is the mean of the samples
  void forward(const double* in, cplx* out) {
    auto* b = reinterpret_cast<cplx*>(buf_);
    for (std::size_t i = 0; i < vol_; ++i) b[i] = cplx{in[i], 0.0};
    fftw_execute(fwd_);
    const double scale = 1.0 / double(vol_);
    for (std::size_t i = 0; i < vol_; ++i) out[i] = b[i] * scale;
  }

 private:
  std::size_t vol_;
  fftw_complex* buf_;
  fftw_plan fwd_;
  fftw_plan bwd_;
};

inline FftPlans& plans_for(const TorusGrid& g) {
  static std::mutex mu;
  static std::unordered_map<long, std::unique_ptr<FftPlans>> cache;
  std::lock_guard<std::mutex> lock(mu);
  long key = long(g.n) * 1000000 + g.N;
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<FftPlans>(g)).first;
  return *it->second;
}

}  // namespace detail

inline std::vector<PhysicalComponent> to_physical(const SpectralField& f) {
  auto& plans = detail::plans_for(f.grid);
  std::vector<PhysicalComponent> out(std::size_t(f.components),
                                     PhysicalComponent(f.volume()));
  for (int c = 0; c < f.components; ++c)
    plans.inverse(&f.at(c, std::size_t(0)), out[std::size_t(c)].data());
  return out;
}

inline SpectralField from_physical(const TorusGrid& grid,
                                   const std::vector<PhysicalComponent>& phys) {
  if (phys.empty()) throw contract_error("from_physical: no components");
  SpectralField f(grid, int(phys.size()));
  for (std::size_t c = 0; c < phys.size(); ++c) {
    if (phys[c].size() != grid.size())
      throw config_error("from_physical: sample count does not match grid");
    detail::plans_for(grid).forward(phys[c].data(), &f.at(int(c), std::size_t(0)));
  }
  return f;
}

// Inverse transform followed by forward transform; the contract is that this
// reproduces the input coefficients to roundoff.
inline SpectralField transform_roundtrip(const SpectralField& f) {
  SpectralField out = from_physical(f.grid, to_physical(f));
  out.components = f.components;
  out.mean_zero = f.mean_zero;
  out.div_free = f.div_free;
  return out;
}

}  // namespace mhdlab
