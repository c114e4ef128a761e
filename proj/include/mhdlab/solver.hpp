#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "mhdlab/diagnostics.hpp"
#include "mhdlab/diophantine.hpp"
#include "mhdlab/field.hpp"
#include "mhdlab/operators.hpp"
#include "mhdlab/transform.hpp"

namespace mhdlab {

// Time-stamped solver state: divergence-free, mean-zero, conjugate-symmetric
// spectral pair plus the dissipation case (mu, nu) and the background field.
struct SimState {
  double t = 0.0;
  SpectralField u_hat;
  SpectralField b_hat;
  double mu = 0.0;
  double nu = 1.0;
  BackgroundField bg;
};

struct SolverConfig {
  double dt = 1e-3;
  double T = 1.0;
  double cfl_guard = 0.8;    // abort when max|u,b| dt / dx exceeds this
  bool project_b = true;     // re-project the magnetic tendency each stage
  int record_stride = 100;   // diagnostic cadence, in steps
};

// Explicit (non-stiff) tendency of the perturbation system: pseudospectral
// convective terms plus the b~.grad coupling; diffusion is excluded and
// handled exactly by the integrating factor in the stepper.
struct RhsEval {
  SpectralField du;
  SpectralField db;
  double max_speed = 0.0;  // physical-space max of |u| + |b|, for the CFL guard
};

inline RhsEval nonlinear_rhs(const SpectralField& u_hat, const SpectralField& b_hat,
                             const Vec& b_tilde, bool project_b) {
  u_hat.require_shape_of(b_hat, "nonlinear_rhs");
  const TorusGrid& grid = u_hat.grid;
  const int n = grid.n;
  const std::size_t vol = grid.size();

  SpectralField ud = dealias(u_hat);
  SpectralField bd = dealias(b_hat);
  auto u = to_physical(ud);
  auto b = to_physical(bd);

  // spectral gradients, then back to physical space for the products
  std::vector<std::vector<PhysicalComponent>> grad_u{std::size_t(n)};
  std::vector<std::vector<PhysicalComponent>> grad_b{std::size_t(n)};
  for (int j = 0; j < n; ++j) {
    SpectralField dju(grid, n), djb(grid, n);
    for (std::size_t i = 0; i < vol; ++i) {
      const cplx ikj{0.0, double(grid.freq(i)[j])};
      for (int c = 0; c < n; ++c) {
        dju.at(c, i) = ikj * ud.at(c, i);
        djb.at(c, i) = ikj * bd.at(c, i);
      }
    }
    grad_u[std::size_t(j)] = to_physical(dju);
    grad_b[std::size_t(j)] = to_physical(djb);
  }

  double max_u = 0.0, max_b = 0.0;
  std::vector<PhysicalComponent> conv_u(std::size_t(n), PhysicalComponent(vol, 0.0));
  std::vector<PhysicalComponent> conv_b(std::size_t(n), PhysicalComponent(vol, 0.0));
  for (std::size_t x = 0; x < vol; ++x) {
    double uu = 0.0, bb = 0.0;
    for (int c = 0; c < n; ++c) {
      uu += u[std::size_t(c)][x] * u[std::size_t(c)][x];
      bb += b[std::size_t(c)][x] * b[std::size_t(c)][x];
    }
    max_u = std::max(max_u, uu);
    max_b = std::max(max_b, bb);
    for (int i = 0; i < n; ++i) {
      double cu = 0.0, cb = 0.0;
      for (int j = 0; j < n; ++j) {
        const double uj = u[std::size_t(j)][x];
        const double bj = b[std::size_t(j)][x];
        cu += bj * grad_b[std::size_t(j)][std::size_t(i)][x] -
              uj * grad_u[std::size_t(j)][std::size_t(i)][x];
        cb += bj * grad_u[std::size_t(j)][std::size_t(i)][x] -
              uj * grad_b[std::size_t(j)][std::size_t(i)][x];
      }
      conv_u[std::size_t(i)][x] = cu;
      conv_b[std::size_t(i)][x] = cb;
    }
  }

  RhsEval out;
  out.max_speed = std::sqrt(max_u) + std::sqrt(max_b);
  if (!std::isfinite(out.max_speed))
    throw divergence_error("nonlinear_rhs: NaN/Inf in physical-space products");

  out.du = dealias(from_physical(grid, conv_u));
  out.db = dealias(from_physical(grid, conv_b));

  // coupling with the background field, applied as a multiplier
  for (std::size_t i = 0; i < vol; ++i) {
    const cplx ibk{0.0, dot(b_tilde, grid.freq(i))};
    for (int c = 0; c < n; ++c) {
      out.du.at(c, i) += ibk * b_hat.at(c, i);
      out.db.at(c, i) += ibk * u_hat.at(c, i);
    }
  }

  // pressure elimination
  out.du = leray_project(out.du);
  if (project_b) out.db = leray_project(out.db);
  zero_mean_mode(out.du);
  zero_mean_mode(out.db);
  return out;
}

// Classical RK4 on integrating-factor variables: the dissipative terms
// mu Delta u, nu Delta b are integrated exactly per mode, the rest
// explicitly.  One Stepper instance caches the exponential factors.
class Stepper {
 public:
  Stepper(const TorusGrid& grid, double mu, double nu, double dt)
      : grid_(grid), dt_(dt), eu_(grid.size()), eb_(grid.size()) {
    // negative dt is allowed: it time-reverses the scheme (useful in the
    // ideal case mu = nu = 0, where the flow is reversible)
    if (dt == 0.0) throw contract_error("Stepper: dt must be nonzero");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double k2 = norm2(grid.freq(i));
      eu_[i] = std::exp(-mu * k2 * 0.5 * dt);
      eb_[i] = std::exp(-nu * k2 * 0.5 * dt);
    }
  }

  void advance(SimState& s, const SolverConfig& cfg) const {
    const double dt = dt_;
    const std::size_t vol = grid_.size();
    const int n = grid_.n;
    const Vec& bt = s.bg.b_tilde;

    RhsEval k1 = nonlinear_rhs(s.u_hat, s.b_hat, bt, cfg.project_b);
    const double dx = 2.0 * M_PI / grid_.N;
    if (k1.max_speed * std::abs(dt) / dx > cfg.cfl_guard)
      throw divergence_error("CFL guard tripped at t = " + std::to_string(s.t) +
                             " (max speed " + std::to_string(k1.max_speed) + ")");

    SpectralField ua(grid_, n), ba(grid_, n);
    auto half_scale = [&](SpectralField& dst, const SpectralField& base,
                          const SpectralField& slope, const std::vector<double>& e) {
      for (std::size_t i = 0; i < vol; ++i)
        for (int c = 0; c < n; ++c)
          dst.at(c, i) = e[i] * (base.at(c, i) + 0.5 * dt * slope.at(c, i));
    };
    half_scale(ua, s.u_hat, k1.du, eu_);
    half_scale(ba, s.b_hat, k1.db, eb_);
    RhsEval k2 = nonlinear_rhs(ua, ba, bt, cfg.project_b);

    for (std::size_t i = 0; i < vol; ++i)
      for (int c = 0; c < n; ++c) {
        ua.at(c, i) = eu_[i] * s.u_hat.at(c, i) + 0.5 * dt * k2.du.at(c, i);
        ba.at(c, i) = eb_[i] * s.b_hat.at(c, i) + 0.5 * dt * k2.db.at(c, i);
      }
    RhsEval k3 = nonlinear_rhs(ua, ba, bt, cfg.project_b);

    for (std::size_t i = 0; i < vol; ++i)
      for (int c = 0; c < n; ++c) {
        ua.at(c, i) = eu_[i] * (eu_[i] * s.u_hat.at(c, i) + dt * k3.du.at(c, i));
        ba.at(c, i) = eb_[i] * (eb_[i] * s.b_hat.at(c, i) + dt * k3.db.at(c, i));
      }
    RhsEval k4 = nonlinear_rhs(ua, ba, bt, cfg.project_b);

    for (std::size_t i = 0; i < vol; ++i) {
      const double e1u = eu_[i], e2u = e1u * e1u;
      const double e1b = eb_[i], e2b = e1b * e1b;
      for (int c = 0; c < n; ++c) {
        s.u_hat.at(c, i) =
            e2u * s.u_hat.at(c, i) +
            (dt / 6.0) * (e2u * k1.du.at(c, i) +
                          2.0 * e1u * (k2.du.at(c, i) + k3.du.at(c, i)) + k4.du.at(c, i));
        s.b_hat.at(c, i) =
            e2b * s.b_hat.at(c, i) +
            (dt / 6.0) * (e2b * k1.db.at(c, i) +
                          2.0 * e1b * (k2.db.at(c, i) + k3.db.at(c, i)) + k4.db.at(c, i));
      }
    }

    // restore the discrete invariants exactly
    s.u_hat = leray_project(s.u_hat);
    if (cfg.project_b) s.b_hat = leray_project(s.b_hat);
    zero_mean_mode(s.u_hat);
    zero_mean_mode(s.b_hat);
    symmetrize(s.u_hat);
    symmetrize(s.b_hat);
    s.t += dt;
  }

 private:
  TorusGrid grid_;
  double dt_;
  std::vector<double> eu_, eb_;
};

inline SimState step(const SimState& state, const SolverConfig& cfg) {
  Stepper stepper(state.u_hat.grid, state.mu, state.nu, cfg.dt);
  SimState out = state;
  stepper.advance(out, cfg);
  return out;
}

struct RunHooks {
  // called at t = 0, every record_stride steps, and at the final step
  std::function<void(const SimState&, std::size_t step)> on_record;
};

struct RunSummary {
  NormSeries energy;       // 1/2 (||u||^2 + ||b||^2), every step
  NormSeries dissipation;  // mu ||grad u||^2 + nu ||grad b||^2, every step
  SimState final_state;
  std::size_t steps = 0;
};

inline RunSummary run(const SimState& state0, const SolverConfig& cfg,
                      const RunHooks& hooks = {}) {
  SimState s = state0;
  const std::size_t nsteps = std::size_t(std::llround(cfg.T / cfg.dt));
  Stepper stepper(s.u_hat.grid, s.mu, s.nu, cfg.dt);

  RunSummary out;
  out.energy.label = "energy";
  out.dissipation.label = "dissipation";
  const double t0 = s.t;

  auto record_budget = [&](const SimState& st) {
    double eu = 0.0, eb = 0.0, gu = 0.0, gb = 0.0;
    const std::size_t vol = st.u_hat.volume();
    for (std::size_t i = 0; i < vol; ++i) {
      const double k2 = norm2(st.u_hat.grid.freq(i));
      for (int c = 0; c < st.u_hat.components; ++c) {
        const double au = std::norm(st.u_hat.at(c, i));
        const double ab = std::norm(st.b_hat.at(c, i));
        eu += au;
        eb += ab;
        gu += k2 * au;
        gb += k2 * ab;
      }
    }
    out.energy.push(st.t, 0.5 * (eu + eb));
    out.dissipation.push(st.t, st.mu * gu + st.nu * gb);
  };

  record_budget(s);
  if (hooks.on_record) hooks.on_record(s, 0);
  for (std::size_t i = 1; i <= nsteps; ++i) {
    stepper.advance(s, cfg);
    s.t = t0 + double(i) * cfg.dt;  // avoid accumulation drift
    record_budget(s);
    if (hooks.on_record && (i % std::size_t(cfg.record_stride) == 0 || i == nsteps))
      hooks.on_record(s, i);
  }
  out.final_state = std::move(s);
  out.steps = nsteps;
  return out;
}

}  // namespace mhdlab
