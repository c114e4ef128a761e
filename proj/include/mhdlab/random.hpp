#pragma once

#include <cstdint>
#include <random>

#include "mhdlab/field.hpp"
#include "mhdlab/operators.hpp"

namespace mhdlab {

// Band-limited pseudorandom real field: independent Gaussian coefficients on
// the canonical half of the shell set |k| <= k_band, conjugate partners
// filled in explicitly.  Deterministic for a fixed seed.
inline SpectralField make_random_field(const TorusGrid& grid, int components,
                                       double k_band, std::uint64_t seed,
                                       bool project = false) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SpectralField f(grid, components);
  const std::size_t vol = f.volume();
  for (std::size_t i = 1; i < vol; ++i) {
    const Mode k = grid.freq(i);
    if (!is_canonical(k) || norm(k) > k_band || linf(k) > grid.K_dealias) continue;
    const std::size_t j = grid.conj_index(i);
    for (int c = 0; c < components; ++c) {
      cplx a{gauss(rng), gauss(rng)};
      f.at(c, i) = a;
      f.at(c, j) = std::conj(a);
    }
  }
  f.mean_zero = true;
  if (project && components == grid.n) return leray_project(f);
  return f;
}

// Divergence-free, mean-zero random pair (u0, b0) supported on |k| <= k_band,
// scaled so that ||u0||_{H^s} + ||b0||_{H^s} equals the target amplitude.
inline std::pair<SpectralField, SpectralField> make_random_pair(
    const TorusGrid& grid, double k_band, double amplitude, double norm_index,
    std::uint64_t seed) {
  SpectralField u = make_random_field(grid, grid.n, k_band, seed, /*project=*/true);
  SpectralField b = make_random_field(grid, grid.n, k_band, seed + 0x9e3779b97f4a7c15ull,
                                      /*project=*/true);
  double total = sobolev_norm(u, norm_index, false) + sobolev_norm(b, norm_index, false);
  if (total > 0.0) {
    u *= amplitude / total;
    b *= amplitude / total;
  }
  symmetrize(u);
  symmetrize(b);
  return {u, b};
}

}  // namespace mhdlab
