#pragma once

#include <cmath>

#include "mhdlab/field.hpp"
#include "mhdlab/grid.hpp"

namespace mhdlab {

// Helmholtz-Leray projection: per mode k != 0,
//   v(k) -> v(k) - k (k.v(k)) / |k|^2,
// mode k = 0 untouched.  Kills gradient parts, fixes divergence-free fields.
inline SpectralField leray_project(const SpectralField& f) {
  if (!f.is_vector())
    throw contract_error("leray_project: vector field with n components required");
  SpectralField out = f;
  const std::size_t vol = f.volume();
  for (std::size_t i = 1; i < vol; ++i) {
    Mode k = f.grid.freq(i);
    double k2 = norm2(k);
    if (k2 == 0.0) continue;  // aliased zero cannot occur for i >= 1, but be safe
    cplx kdotv{0.0, 0.0};
    for (int c = 0; c < f.components; ++c) kdotv += double(k[c]) * f.at(c, i);
    kdotv /= k2;
    for (int c = 0; c < f.components; ++c) out.at(c, i) -= double(k[c]) * kdotv;
  }
  out.div_free = true;
  return out;
}

// Lambda^s: multiply coefficient at k by |k|^s.  The mean mode is zeroed for
// s != 0 (the symbol is 0 for s > 0 and undefined for s < 0).
inline SpectralField fractional_laplacian(const SpectralField& f, double s) {
  if (s < 0.0 && !f.mean_zero && max_mean_mode(f) > 0.0)
    throw contract_error("fractional_laplacian: s < 0 requires a mean-zero field");
  SpectralField out = f;
  const std::size_t vol = f.volume();
  for (std::size_t i = 1; i < vol; ++i) {
    double w = std::pow(norm2(f.grid.freq(i)), 0.5 * s);
    for (int c = 0; c < f.components; ++c) out.at(c, i) *= w;
  }
  if (s != 0.0) {
    for (int c = 0; c < f.components; ++c) out.at(c, std::size_t(0)) = cplx{0.0, 0.0};
    out.mean_zero = true;
  }
  return out;
}

// b~.grad: multiply coefficient at k by i (b~.k).
inline SpectralField directional_derivative(const SpectralField& f, const Vec& b_tilde) {
  SpectralField out = f;
  const std::size_t vol = f.volume();
  for (std::size_t i = 0; i < vol; ++i) {
    cplx m{0.0, dot(b_tilde, f.grid.freq(i))};
    for (int c = 0; c < f.components; ++c) out.at(c, i) = m * f.at(c, i);
  }
  out.mean_zero = true;  // symbol vanishes at k = 0
  out.div_free = f.div_free;
  return out;
}

// Sobolev norm on coefficients: homogeneous weight |k|^{2s}, inhomogeneous
// (1+|k|^2)^s.  The (2pi)^n Plancherel factor is dropped throughout.
inline double sobolev_norm(const SpectralField& f, double s, bool homogeneous) {
  if (homogeneous && s < 0.0 && !f.mean_zero && max_mean_mode(f) > 0.0)
    throw contract_error("sobolev_norm: homogeneous norm with s < 0 needs mean-zero field");
  double sum = 0.0;
  const std::size_t vol = f.volume();
  for (std::size_t i = 0; i < vol; ++i) {
    double k2 = norm2(f.grid.freq(i));
    double w;
    if (homogeneous) {
      if (k2 == 0.0) continue;  // |k|^{2s} weight: mean mode contributes nothing
      w = std::pow(k2, s);
    } else {
      w = std::pow(1.0 + k2, s);
    }
    double a = 0.0;
    for (int c = 0; c < f.components; ++c) a += std::norm(f.at(c, i));
    sum += w * a;
  }
  return std::sqrt(sum);
}

inline double l2_norm(const SpectralField& f) { return sobolev_norm(f, 0.0, false); }

// 2/3-rule dealiasing: zero every coefficient with max_i |k_i| > K_dealias.
inline SpectralField dealias(const SpectralField& f) {
  SpectralField out = f;
  const std::size_t vol = f.volume();
  for (std::size_t i = 0; i < vol; ++i) {
    if (linf(f.grid.freq(i)) > f.grid.K_dealias) {
      for (int c = 0; c < f.components; ++c) out.at(c, i) = cplx{0.0, 0.0};
    }
  }
  return out;
}

inline bool is_band_limited(const SpectralField& f, int K) {
  const std::size_t vol = f.volume();
  for (std::size_t i = 0; i < vol; ++i) {
    if (linf(f.grid.freq(i)) > K) {
      for (int c = 0; c < f.components; ++c) {
        if (f.at(c, i) != cplx{0.0, 0.0}) return false;
      }
    }
  }
  return true;
}

}  // namespace mhdlab
