#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mhdlab/field.hpp"
#include "mhdlab/grid.hpp"
#include "mhdlab/operators.hpp"

namespace mhdlab {

// A sampled norm (or functional) history.
struct NormSeries {
  std::vector<double> times;
  std::vector<double> values;
  std::string label;

  void push(double t, double v) {
    if (!times.empty() && t <= times.back())
      throw contract_error("NormSeries: times must be strictly increasing");
    times.push_back(t);
    values.push_back(v);
  }

  std::size_t size() const { return times.size(); }
};

// Least-squares fit of log(value) against log(1+t).
struct DecayFit {
  double exponent = 0.0;   // slope
  double amplitude = 0.0;  // intercept (log value at t = 0)
  double t_min = 0.0;
  double t_max = 0.0;
  double residual = 0.0;   // RMS of fit residuals
  bool super_algebraic = false;  // slope keeps steepening across the window
};

inline DecayFit fit_decay_exponent(const NormSeries& series, double t_min, double t_max) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < series.size(); ++i) {
    double t = series.times[i];
    if (t < t_min || t > t_max) continue;
    double v = series.values[i];
    if (!(v > 0.0))
      throw contract_error("fit_decay_exponent: nonpositive value inside window");
    xs.push_back(std::log1p(t));
    ys.push_back(std::log(v));
  }
  if (xs.size() < 8)
    throw contract_error("fit_decay_exponent: need at least 8 samples in window");

  auto line_fit = [](const std::vector<double>& x, const std::vector<double>& y,
                     std::size_t lo, std::size_t hi, double& slope, double& icept) {
    double n = double(hi - lo), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = lo; i < hi; ++i) {
      sx += x[i];
      sy += y[i];
      sxx += x[i] * x[i];
      sxy += x[i] * y[i];
    }
    double det = n * sxx - sx * sx;
    slope = (n * sxy - sx * sy) / det;
    icept = (sy - slope * sx) / n;
  };

  DecayFit fit;
  fit.t_min = t_min;
  fit.t_max = t_max;
  line_fit(xs, ys, 0, xs.size(), fit.exponent, fit.amplitude);
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double r = ys[i] - (fit.amplitude + fit.exponent * xs[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / double(xs.size()));

  // exponential decay shows up as a slope that steepens with log(1+t)
  if (xs.size() >= 16) {
    double s1, s2, c;
    line_fit(xs, ys, 0, xs.size() / 2, s1, c);
    line_fit(xs, ys, xs.size() / 2, xs.size(), s2, c);
    fit.super_algebraic = (s2 < 1.5 * s1 && s1 < -0.1);
  }
  return fit;
}

struct DecayBoundCheck {
  double C_observed = 0.0;
  bool ok = false;
  double t_argmax = 0.0;
};

// Surrogate for "value <= C (1+t)^{-p} with finite C" on a finite horizon:
// the running maximum of value * (1+t)^p must be attained before the final
// 20% of the time window, otherwise the bound is being violated by
// late-time growth.
inline DecayBoundCheck decay_bound_check(const NormSeries& series, double p) {
  if (p < 0.0) throw contract_error("decay_bound_check: p must be nonnegative");
  if (series.size() == 0) throw contract_error("decay_bound_check: empty series");
  DecayBoundCheck out;
  for (std::size_t i = 0; i < series.size(); ++i) {
    double c = series.values[i] * std::pow(1.0 + series.times[i], p);
    if (c > out.C_observed) {
      out.C_observed = c;
      out.t_argmax = series.times[i];
    }
  }
  double t0 = series.times.front(), t1 = series.times.back();
  out.ok = std::isfinite(out.C_observed) && out.t_argmax <= t0 + 0.8 * (t1 - t0);
  return out;
}

// The coupling term of the Lyapunov functional,
//   int (b~.grad u) . Lambda^s b dx  =  Re sum_k i (b~.k) u(k) . conj(|k|^s b(k)),
// in the coefficient normalization (no (2pi)^n factor).
inline double cross_term(const SpectralField& u, const SpectralField& b, const Vec& b_tilde,
                         double s) {
  u.require_shape_of(b, "cross_term");
  double acc = 0.0;
  const std::size_t vol = u.volume();
  for (std::size_t i = 1; i < vol; ++i) {
    const Mode k = u.grid.freq(i);
    const double w = std::pow(norm2(k), 0.5 * s);
    const cplx ibk{0.0, dot(b_tilde, k)};
    for (int c = 0; c < u.components; ++c)
      acc += (ibk * u.at(c, i) * std::conj(b.at(c, i))).real() * w;
  }
  return acc;
}

// Lyapunov functional weights; A = |b~|/2 + 1 guarantees the lower bound
// F >= ||Lambda^{s/2+1} u||^2 + ||Lambda^{s/2+1} b||^2 on mean-zero states.
struct LyapunovConfig {
  double s = 2.2;  // functional index, default 2r
  double A = 0.0;

  LyapunovConfig(double s_, const Vec& b_tilde) : s(s_), A(0.5 * norm(b_tilde) + 1.0) {}
};

inline double lyapunov_value(const SpectralField& u, const SpectralField& b,
                             const Vec& b_tilde, const LyapunovConfig& cfg) {
  if (max_mean_mode(u) != 0.0 || max_mean_mode(b) != 0.0)
    throw contract_error("lyapunov_value: mean-zero state required");
  double nu = sobolev_norm(u, 0.5 * cfg.s + 1.0, true);
  double nb = sobolev_norm(b, 0.5 * cfg.s + 1.0, true);
  return cfg.A * (nu * nu + nb * nb) - cross_term(u, b, b_tilde, cfg.s);
}

// Max over steps of |Delta E + dt (mu ||grad u||^2 + nu ||grad b||^2)| / E,
// with the dissipation integral done by the trapezoid rule.  energy and
// dissipation must be sampled at every step.
inline double energy_balance_residual(const NormSeries& energy,
                                      const NormSeries& dissipation) {
  if (energy.size() != dissipation.size() || energy.size() < 2)
    throw contract_error("energy_balance_residual: mismatched or short series");
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < energy.size(); ++i) {
    double dt = energy.times[i + 1] - energy.times[i];
    double dE = energy.values[i + 1] - energy.values[i];
    double diss = 0.5 * dt * (dissipation.values[i] + dissipation.values[i + 1]);
    double ref = std::max(energy.values[i], energy.values[i + 1]);
    if (ref > 0.0) worst = std::max(worst, std::abs(dE + diss) / ref);
  }
  return worst;
}

}  // namespace mhdlab
