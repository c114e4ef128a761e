#pragma once

#include <complex>
#include <vector>

#include "mhdlab/errors.hpp"
#include "mhdlab/grid.hpp"

namespace mhdlab {

using cplx = std::complex<double>;

// Truncated Fourier coefficients of a real field on the torus.  Storage is
// the full symmetric band (conjugate symmetry is an invariant, not a
// compression scheme), component-major.  Coefficient convention:
//   coeff(k) = (2pi)^{-n} \int f(x) e^{-ik.x} dx.
struct SpectralField {
  TorusGrid grid;
  int components = 1;
  std::vector<cplx> coeffs;
  bool mean_zero = false;
  bool div_free = false;

  SpectralField() = default;

  SpectralField(const TorusGrid& g, int comps)
      : grid(g), components(comps), coeffs(g.size() * std::size_t(comps), cplx{0.0, 0.0}) {
    if (comps < 1) throw contract_error("field needs at least one component");
  }

  std::size_t volume() const { return grid.size(); }

  cplx& at(int comp, std::size_t idx) { return coeffs[std::size_t(comp) * volume() + idx]; }
  const cplx& at(int comp, std::size_t idx) const {
    return coeffs[std::size_t(comp) * volume() + idx];
  }

  cplx& at(int comp, const Mode& k) { return at(comp, grid.index(k)); }
  const cplx& at(int comp, const Mode& k) const { return at(comp, grid.index(k)); }

  bool is_vector() const { return components == grid.n; }

  void require_shape_of(const SpectralField& other, const char* where) const {
    if (!(grid == other.grid) || components != other.components)
      throw contract_error(std::string(where) + ": field shape mismatch");
  }
};

inline SpectralField& operator+=(SpectralField& a, const SpectralField& b) {
  a.require_shape_of(b, "operator+=");
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) a.coeffs[i] += b.coeffs[i];
  a.mean_zero = a.mean_zero && b.mean_zero;
  a.div_free = a.div_free && b.div_free;
  return a;
}

inline SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }

inline SpectralField& operator*=(SpectralField& a, double s) {
  for (auto& c : a.coeffs) c *= s;
  return a;
}

inline SpectralField operator*(double s, SpectralField a) { return a *= s; }

// Largest coefficient magnitude, over all components and modes.
inline double linf_coeff(const SpectralField& f) {
  double m = 0.0;
  for (const auto& c : f.coeffs) m = std::max(m, std::abs(c));
  return m;
}

// Worst-case deviation from conjugate symmetry coeff(-k) = conj(coeff(k)).
inline double conjugate_symmetry_defect(const SpectralField& f) {
  double worst = 0.0;
  for (int c = 0; c < f.components; ++c) {
    for (std::size_t i = 0; i < f.volume(); ++i) {
      std::size_t j = f.grid.conj_index(i);
      worst = std::max(worst, std::abs(f.at(c, i) - std::conj(f.at(c, j))));
    }
  }
  return worst;
}

// Average each {k, -k} pair so conjugate symmetry holds exactly.
inline void symmetrize(SpectralField& f) {
  for (int c = 0; c < f.components; ++c) {
    for (std::size_t i = 0; i < f.volume(); ++i) {
      std::size_t j = f.grid.conj_index(i);
      if (i < j) {
        cplx avg = 0.5 * (f.at(c, i) + std::conj(f.at(c, j)));
        f.at(c, i) = avg;
        f.at(c, j) = std::conj(avg);
      } else if (i == j) {
        f.at(c, i) = cplx{f.at(c, i).real(), 0.0};
      }
    }
  }
}

inline void zero_mean_mode(SpectralField& f) {
  for (int c = 0; c < f.components; ++c) f.at(c, std::size_t(0)) = cplx{0.0, 0.0};
  f.mean_zero = true;
}

inline double max_mean_mode(const SpectralField& f) {
  double m = 0.0;
  for (int c = 0; c < f.components; ++c) m = std::max(m, std::abs(f.at(c, std::size_t(0))));
  return m;
}

// max_k |sum_i k_i coeff_i(k)| for a vector field.
inline double max_divergence(const SpectralField& f) {
  if (!f.is_vector()) throw contract_error("max_divergence: vector field required");
  double worst = 0.0;
  for (std::size_t i = 0; i < f.volume(); ++i) {
    Mode k = f.grid.freq(i);
    cplx d{0.0, 0.0};
    for (int c = 0; c < f.components; ++c) d += double(k[c]) * f.at(c, i);
    worst = std::max(worst, std::abs(d));
  }
  return worst;
}

}  // namespace mhdlab
