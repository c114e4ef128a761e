#pragma once

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "mhdlab/diophantine.hpp"
#include "mhdlab/field.hpp"
#include "mhdlab/grid.hpp"
#include "mhdlab/operators.hpp"

namespace mhdlab {

// Dissipation case of the perturbation system: exactly one of the two
// fields carries a Laplacian.
enum class DissipationCase {
  mu0_nu1,  // inviscid velocity, resistive magnetic field
  mu1_nu0,  // viscous velocity, ideal magnetic field
};

enum class ModeRegime { hyperbolic, oscillatory, degenerate };

// Per-frequency eigen-data of the damped-wave symbol
//   lambda^2 + |k|^2 lambda + (b~.k)^2 = 0,
// written with a = |k|^2/2 and d = (b~.k)^2 so the roots are -a +- sigma,
// sigma = sqrt(a^2 - d) (imaginary in the oscillatory regime).
struct ModeExponents {
  Mode k{0, 0, 0};
  double a = 0.0;              // |k|^2 / 2
  double d = 0.0;              // (b~.k)^2
  ModeRegime regime = ModeRegime::degenerate;
  double sigma_or_omega = 0.0;  // sqrt(|a^2 - d|)
  cplx lambda1{0.0, 0.0};
  cplx lambda2{0.0, 0.0};
};

namespace detail {

inline constexpr double kDegenerateThreshold = 1e-10;

inline bool is_degenerate(double a, double d) {
  double a2 = a * a;
  return std::abs(a2 - d) <= kDegenerateThreshold * std::max({a2, d, 1.0});
}

// L1/L2 kernel values without the k != 0 gate; also exact at k = 0
// (a = d = 0 gives L1 = 1, L2 = t).
inline std::pair<double, double> kernel_values_raw(double a, double d, double t) {
  const double a2 = a * a;
  if (is_degenerate(a, d)) {
    // double-root neighborhood: cosh/sinhc series in x = (a^2 - d) t^2,
    // truncated when the next term is negligible
    const double x = (a2 - d) * t * t;
    double term1 = 1.0, sum1 = 1.0;  // sum x^m / (2m)!
    double term2 = 1.0, sum2 = 1.0;  // sum x^m / (2m+1)!
    for (int m = 1; m <= 40; ++m) {
      term1 *= x / double((2 * m) * (2 * m - 1));
      term2 *= x / double((2 * m) * (2 * m + 1));
      sum1 += term1;
      sum2 += term2;
      if (std::abs(term1) < 1e-17 * std::abs(sum1) &&
          std::abs(term2) < 1e-17 * std::abs(sum2))
        break;
    }
    const double e = std::exp(-a * t);
    return {e * sum1, t * e * sum2};
  }
  if (a2 > d) {
    // hyperbolic: real roots lambda1 = -d/(a+sigma), lambda2 = -(a+sigma);
    // L2 via expm1 to dodge the cancellation as sigma -> 0
    const double sigma = std::sqrt(a2 - d);
    const double lambda1 = -d / (a + sigma);
    const double lambda2 = -(a + sigma);
    const double e1 = std::exp(lambda1 * t);
    const double e2 = std::exp(lambda2 * t);
    const double L1 = 0.5 * (e1 + e2);
    // expm1 form kills the cancellation as sigma -> 0 but overflows for
    // large sigma t, where the direct difference is already safe
    const double x = 2.0 * sigma * t;
    const double L2 = (x < 700.0) ? e2 * std::expm1(x) / (2.0 * sigma)
                                  : (e1 - e2) / (2.0 * sigma);
    return {L1, L2};
  }
  // oscillatory: sigma imaginary, omega = sqrt(d - a^2)
  const double omega = std::sqrt(d - a2);
  const double e = std::exp(-a * t);
  return {e * std::cos(omega * t), e * std::sin(omega * t) / omega};
}

}  // namespace detail

inline ModeExponents mode_exponents(const Mode& k, const Vec& b_tilde) {
  if (is_zero(k)) throw contract_error("mode_exponents: k = 0");
  ModeExponents me;
  me.k = k;
  me.a = 0.5 * norm2(k);
  const double bk = dot(b_tilde, k);
  me.d = bk * bk;
  const double a2 = me.a * me.a;
  me.sigma_or_omega = std::sqrt(std::abs(a2 - me.d));
  if (a2 >= me.d) {
    me.lambda1 = cplx{-me.d / (me.a + me.sigma_or_omega), 0.0};
    me.lambda2 = cplx{-(me.a + me.sigma_or_omega), 0.0};
  } else {
    me.lambda1 = cplx{-me.a, me.sigma_or_omega};
    me.lambda2 = cplx{-me.a, -me.sigma_or_omega};
  }
  me.regime = detail::is_degenerate(me.a, me.d) ? ModeRegime::degenerate
              : (a2 > me.d)                     ? ModeRegime::hyperbolic
                                                : ModeRegime::oscillatory;
  return me;
}

// Scalar kernels of the damped-wave propagator,
//   L1 = (e^{l1 t} + e^{l2 t}) / 2,   L2 = (e^{l1 t} - e^{l2 t}) / (2 sigma),
// evaluated stably in all three regimes.
inline std::pair<double, double> kernel_values(const Mode& k, const Vec& b_tilde,
                                               double t) {
  if (is_zero(k)) throw contract_error("kernel_values: k = 0");
  if (t < 0.0) throw contract_error("kernel_values: t must be nonnegative");
  const double a = 0.5 * norm2(k);
  const double bk = dot(b_tilde, k);
  return detail::kernel_values_raw(a, bk * bk, t);
}

struct KernelBoundCheck {
  bool ok = false;
  double slack = 0.0;  // min over the two bounds of (bound - |value|)
  Region region = Region::S1;
  double L1 = 0.0;
  double L2 = 0.0;
};

// Machine check of the per-region kernel estimates, with every constant
// pinned.  S1: |L1| <= e^{-|k|^2 t/2}, |L2| <= (4/e) e^{-|k|^2 t/4}/|k|^2.
// S2: |L1| <= e^{-|k|^2 t/4}, |L2| <= (8/e) e^{-|k|^2 t/8}/|k|^2.
// S3: |L1| <= (e^{-d t/|k|^2} + e^{-3|k|^2 t/4})/2,
//     |L2| <= 2 (e^{-d t/|k|^2} + e^{-3|k|^2 t/4})/|k|^2
// (the S3 L2 constant comes from 1/(2 sigma) <= 2/|k|^2 on S3).
inline KernelBoundCheck kernel_bound_check(const Mode& k, const Vec& b_tilde, double t) {
  KernelBoundCheck out;
  out.region = classify_mode(k, b_tilde);
  auto [L1, L2] = kernel_values(k, b_tilde, t);
  out.L1 = L1;
  out.L2 = L2;
  const double k2 = norm2(k);
  const double bk = dot(b_tilde, k);
  const double d = bk * bk;
  double bound1 = 0.0, bound2 = 0.0;
  switch (out.region) {
    case Region::S1:
      bound1 = std::exp(-0.5 * k2 * t);
      bound2 = (4.0 / std::exp(1.0)) * std::exp(-0.25 * k2 * t) / k2;
      break;
    case Region::S2:
      bound1 = std::exp(-0.25 * k2 * t);
      bound2 = (8.0 / std::exp(1.0)) * std::exp(-0.125 * k2 * t) / k2;
      break;
    case Region::S3: {
      double pair = std::exp(-d * t / k2) + std::exp(-0.75 * k2 * t);
      bound1 = 0.5 * pair;
      bound2 = 2.0 * pair / k2;
      break;
    }
  }
  out.slack = std::min(bound1 - std::abs(L1), bound2 - std::abs(L2));
  out.ok = out.slack >= 0.0;
  return out;
}

// Closed-form solution of the linearized system at time t, per mode:
//   U = L1 U0 + L2 (b~.grad B0 - (mu - nu)/2 Delta U0)
//   B = L1 B0 + L2 (b~.grad U0 + (mu - nu)/2 Delta B0)
// which reduces to opposite sign cases for the two dissipation choices.
inline std::pair<SpectralField, SpectralField> propagate_linear(
    const SpectralField& U0, const SpectralField& B0, const BackgroundField& bg, double t,
    DissipationCase c) {
  U0.require_shape_of(B0, "propagate_linear");
  if (t < 0.0) throw contract_error("propagate_linear: t must be nonnegative");
  if (max_mean_mode(U0) != 0.0 || max_mean_mode(B0) != 0.0)
    throw contract_error("propagate_linear: data must be mean-zero");
  const double sign_u = (c == DissipationCase::mu0_nu1) ? +1.0 : -1.0;
  SpectralField U = U0;
  SpectralField B = B0;
  const std::size_t vol = U0.volume();
  for (std::size_t i = 1; i < vol; ++i) {
    const Mode k = U0.grid.freq(i);
    const double a = 0.5 * norm2(k);
    const double bk = dot(bg.b_tilde, k);
    auto [L1, L2] = detail::kernel_values_raw(a, bk * bk, t);
    const cplx ibk{0.0, bk};
    for (int comp = 0; comp < U0.components; ++comp) {
      const cplx u0 = U0.at(comp, i);
      const cplx b0 = B0.at(comp, i);
      U.at(comp, i) = L1 * u0 + L2 * (ibk * b0 + sign_u * a * u0);
      B.at(comp, i) = L1 * b0 + L2 * (ibk * u0 - sign_u * a * b0);
    }
  }
  U.mean_zero = B.mean_zero = true;
  U.div_free = U0.div_free && B0.div_free;
  B.div_free = U.div_free;
  return {U, B};
}

// Forced second-order problem via the Duhamel form:
//   phi(t) = L1(t) phi0 + L2(t) (phi1 - Delta phi0 / 2)
//            + int_0^t L2(t - tau) f(tau) dtau,
// with the convolution integral evaluated by composite Simpson quadrature
// (O(h^4); an odd interval count uses the 3/8 rule on the last segment).
// Forcing samples sit on the uniform grid tau_j = j h, and t must coincide
// with one of them.
inline SpectralField solve_duhamel(const SpectralField& phi0, const SpectralField& phi1,
                                   const std::vector<SpectralField>& forcing, double h,
                                   double t, const BackgroundField& bg) {
  phi0.require_shape_of(phi1, "solve_duhamel");
  if (t < 0.0) throw contract_error("solve_duhamel: t must be nonnegative");
  std::size_t steps = 0;
  if (t > 0.0 && !forcing.empty()) {
    if (h <= 0.0) throw contract_error("solve_duhamel: sample spacing must be positive");
    double ratio = t / h;
    steps = std::size_t(std::llround(ratio));
    if (std::abs(ratio - double(steps)) > 1e-9 * std::max(1.0, ratio))
      throw contract_error("solve_duhamel: t must land on the forcing sample grid");
    if (steps + 1 > forcing.size())
      throw contract_error("solve_duhamel: forcing samples do not cover [0, t]");
    for (const auto& f : forcing) phi0.require_shape_of(f, "solve_duhamel forcing");
  }

  // quadrature weights over tau_0 .. tau_steps
  std::vector<double> w(steps + 1, 0.0);
  if (steps >= 1) {
    std::size_t simpson_end = steps;
    if (steps % 2 == 1) {
      if (steps >= 3) {
        simpson_end = steps - 3;  // 3/8 rule on the last three intervals
        w[simpson_end] += 3.0 * h / 8.0;
        w[simpson_end + 1] += 9.0 * h / 8.0;
        w[simpson_end + 2] += 9.0 * h / 8.0;
        w[simpson_end + 3] += 3.0 * h / 8.0;
      } else {
        simpson_end = 0;
        w[0] += 0.5 * h;  // single interval: trapezoid is all we have
        w[1] += 0.5 * h;
      }
    }
    for (std::size_t j = 0; j + 2 <= simpson_end; j += 2) {
      w[j] += h / 3.0;
      w[j + 1] += 4.0 * h / 3.0;
      w[j + 2] += h / 3.0;
    }
  }

  SpectralField phi = phi0;
  const std::size_t vol = phi0.volume();
  for (std::size_t i = 0; i < vol; ++i) {
    const Mode k = phi0.grid.freq(i);
    const double a = 0.5 * norm2(k);
    const double bk = dot(bg.b_tilde, k);
    const double d = bk * bk;
    auto [L1, L2] = detail::kernel_values_raw(a, d, t);
    for (int comp = 0; comp < phi0.components; ++comp) {
      cplx value = L1 * phi0.at(comp, i) + L2 * (phi1.at(comp, i) + a * phi0.at(comp, i));
      for (std::size_t j = 0; j <= steps; ++j) {
        if (w[j] == 0.0) continue;
        auto [g1, g2] = detail::kernel_values_raw(a, d, t - double(j) * h);
        (void)g1;
        value += w[j] * g2 * forcing[j].at(comp, i);
      }
      phi.at(comp, i) = value;
    }
  }
  return phi;
}

}  // namespace mhdlab
