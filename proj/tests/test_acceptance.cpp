// Acceptance suite: seven quantitative surrogates for the asymptotic theory,
// each printed as a single PASS/FAIL line.  The process exits with the number
// of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <vector>

#include "mhdlab/diagnostics.hpp"
#include "mhdlab/experiments.hpp"
#include "mhdlab/propagator.hpp"
#include "mhdlab/random.hpp"
#include "mhdlab/solver.hpp"
#include "oracles.hpp"

using namespace mhdlab;

namespace {

int g_failures = 0;

void report(int number, bool ok, const char* what, const std::string& detail,
            double seconds) {
  std::printf("[%s] criterion %d: %s (%s; %.1fs)\n", ok ? "PASS" : "FAIL", number, what,
              detail.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// 1. Kernel bounds with pinned constants over the ball |k|_inf <= 32.
void criterion_kernel_bounds() {
  Timer timer;
  const Vec bt = golden_vector(2);
  long checks = 0, failures = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (int k1 = -32; k1 <= 32; ++k1)
    for (int k2 = -32; k2 <= 32; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      for (double t : {0.0, 0.01, 0.1, 1.0, 10.0, 100.0}) {
        auto chk = kernel_bound_check(Mode{k1, k2, 0}, bt, t);
        ++checks;
        if (!chk.ok) ++failures;
        worst = std::min(worst, chk.slack);
      }
    }
  report(1, failures == 0, "kernel bounds hold on |k|_inf <= 32  x 6 times",
         std::to_string(checks) + " checks, worst slack " + std::to_string(worst),
         timer.seconds());
}

// 2. Closed-form propagator vs an RK4 integration of the first-order system.
void criterion_propagator_oracle() {
  Timer timer;
  const Vec bt = golden_vector(2);
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> ki(-7, 7);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::set<std::pair<int, int>> seen;
  double worst = 0.0;
  int modes = 0;
  while (modes < 100) {
    Mode k{ki(rng), ki(rng), 0};
    if (is_zero(k) || !seen.insert({k[0], k[1]}).second) continue;
    ++modes;
    const cplx u0{gauss(rng), gauss(rng)};
    const cplx b0{gauss(rng), gauss(rng)};
    const double a = 0.5 * norm2(k);
    const double bk = dot(bt, k);
    for (double sign_u : {+1.0, -1.0}) {
      const double mu = (sign_u > 0) ? 0.0 : 1.0;
      auto [L1, L2] = kernel_values(k, bt, 1.0);
      const cplx ibk{0.0, bk};
      const cplx u = L1 * u0 + L2 * (ibk * b0 + sign_u * a * u0);
      const cplx b = L1 * b0 + L2 * (ibk * u0 - sign_u * a * b0);
      auto ref = oracle::rk4_linear_mode(k, bt, mu, 1.0 - mu, u0, b0, 1.0, 1e-4);
      const double scale = std::max(std::abs(ref.u), std::abs(ref.b));
      worst = std::max(worst,
                       std::max(std::abs(u - ref.u), std::abs(b - ref.b)) / scale);
    }
  }
  report(2, worst <= 1e-8, "propagate kernels match RK4 oracle on 100 modes",
         "both cases, max relative error " + std::to_string(worst), timer.seconds());
}

// 3. Duhamel form (homogeneous) agrees with the integral representation.
void criterion_formulation_equivalence() {
  Timer timer;
  TorusGrid g(2, 16);
  BackgroundField bg = certify_background(golden_vector(2), 1.1, 2, g.K_dealias);
  auto [u0, b0] = make_random_pair(g, 5.0, 1.0, 0.0, 606u);
  const double t = 0.8;
  double worst = 0.0;
  for (auto c : {DissipationCase::mu0_nu1, DissipationCase::mu1_nu0}) {
    const double mu = (c == DissipationCase::mu0_nu1) ? 0.0 : 1.0;
    const double nu = 1.0 - mu;
    auto [u, b] = propagate_linear(u0, b0, bg, t, c);

    // phi' at t = 0 from the first-order system
    SpectralField du0(g, 2), db0(g, 2);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double k2 = norm2(g.freq(i));
      const cplx ibk{0.0, dot(bg.b_tilde, g.freq(i))};
      for (int comp = 0; comp < 2; ++comp) {
        du0.at(comp, i) = -mu * k2 * u0.at(comp, i) + ibk * b0.at(comp, i);
        db0.at(comp, i) = -nu * k2 * b0.at(comp, i) + ibk * u0.at(comp, i);
      }
    }
    SpectralField u_w = solve_duhamel(u0, du0, {}, 0.0, t, bg);
    SpectralField b_w = solve_duhamel(b0, db0, {}, 0.0, t, bg);
    for (std::size_t i = 0; i < u.coeffs.size(); ++i) {
      worst = std::max(worst, std::abs(u.coeffs[i] - u_w.coeffs[i]));
      worst = std::max(worst, std::abs(b.coeffs[i] - b_w.coeffs[i]));
    }
  }
  report(3, worst <= 1e-10, "Duhamel form equals the integral representation",
         "both cases, max componentwise difference " + std::to_string(worst),
         timer.seconds());
}

// 4. Algebraic decay of the linear semigroup at the predicted rate.
void criterion_linear_decay() {
  Timer timer;
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::linear_decay;
  cfg.n = 2;
  cfg.b_tilde_spec = "golden";
  cfg.r = 1.1;
  cfg.mu = 0.0;
  cfg.nu = 1.0;
  cfg.band = 512;
  cfg.spectrum_s = 5.0;
  cfg.alpha = {2.0};
  cfg.T = 1e4;
  cfg.samples = 61;
  validate_config(cfg);

  auto samples = detail::linear_decay_samples(cfg);
  NormSeries series;
  for (const auto& s : samples) series.push(s.t, s.norms[0]);

  const double p = (5.0 - 2.0) / (2.0 * (1.0 + 1.1));  // 0.714285...
  DecayBoundCheck chk = decay_bound_check(series, p);
  DecayFit fit = fit_decay_exponent(series, std::sqrt(1.0 + cfg.T) - 1.0, cfg.T);
  const bool ok = chk.ok && fit.exponent <= -0.9 * p;
  report(4, ok, "linear H^2 decay beats (1+t)^{-0.714} on a 512 band",
         "C_observed " + std::to_string(chk.C_observed) + " at t " +
             std::to_string(chk.t_argmax) + ", tail exponent " +
             std::to_string(fit.exponent),
         timer.seconds());
}

// 5. Nonlinear stability surrogate on a 128^2 grid over T = 100.
void criterion_nonlinear_stability() {
  Timer timer;
  TorusGrid g(2, 128);
  SimState state;
  state.mu = 0.0;
  state.nu = 1.0;
  state.bg = certify_background(golden_vector(2), 1.1, 2, g.K_dealias);
  std::tie(state.u_hat, state.b_hat) = make_random_pair(g, 4.0, 1e-2, 2.1, 12345u);

  SolverConfig scfg;
  scfg.dt = 1e-3;
  scfg.T = 100.0;
  scfg.record_stride = 100;

  LyapunovConfig lya(2.2, state.bg.b_tilde);
  double h_initial = 0.0, h_max = 0.0, h_final = 0.0;
  double div_worst = 0.0, mean_worst = 0.0;
  double lya_prev = std::numeric_limits<double>::infinity();
  double lya_uptick = 0.0;
  RunHooks hooks;
  hooks.on_record = [&](const SimState& s, std::size_t step) {
    const double h = sobolev_norm(s.u_hat, 2.1, false) + sobolev_norm(s.b_hat, 2.1, false);
    if (step == 0) h_initial = h;
    h_max = std::max(h_max, h);
    h_final = h;
    div_worst = std::max(div_worst,
                         std::max(max_divergence(s.u_hat), max_divergence(s.b_hat)));
    mean_worst = std::max(mean_worst,
                          std::max(max_mean_mode(s.u_hat), max_mean_mode(s.b_hat)));
    if (s.t >= 5.0) {  // after the initial 5% of the horizon
      const double F = lyapunov_value(s.u_hat, s.b_hat, s.bg.b_tilde, lya);
      if (std::isfinite(lya_prev) && lya_prev > 0.0)
        lya_uptick = std::max(lya_uptick, (F - lya_prev) / lya_prev);
      lya_prev = F;
    }
  };
  RunSummary rs = run(state, scfg, hooks);
  const double residual = energy_balance_residual(rs.energy, rs.dissipation);

  const bool ok_a = residual <= 1e-6;
  const bool ok_b = div_worst <= 1e-12 && mean_worst <= 1e-12;
  const bool ok_c = h_max <= 2.0 * h_initial;
  const bool ok_d = h_final < h_initial;
  const bool ok_e = lya_uptick <= 1e-4;
  char detail[256];
  std::snprintf(detail, sizeof detail,
                "energy residual %.2e (a:%s), div/mean %.1e/%.1e (b:%s), "
                "H^2.1 max/final/initial %.3e/%.3e/%.3e (c:%s d:%s), "
                "F worst uptick %.2e (e:%s)",
                residual, ok_a ? "ok" : "FAIL", div_worst, mean_worst,
                ok_b ? "ok" : "FAIL", h_max, h_final, h_initial, ok_c ? "ok" : "FAIL",
                ok_d ? "ok" : "FAIL", lya_uptick, ok_e ? "ok" : "FAIL");
  report(5, ok_a && ok_b && ok_c && ok_d && ok_e,
         "nonlinear stability surrogate on 128^2, T = 100", detail, timer.seconds());
}

// 6. Diophantine certification of the golden direction.
void criterion_diophantine() {
  Timer timer;
  auto cert = estimate_constant(golden_vector(2), 1.0, 2, 1000);
  // the stated interval is for the squared constant: the Fibonacci-pair
  // values converge to sqrt(phi/sqrt(5)), whose square is phi/sqrt(5)
  const double c2 = cert.c_hat * cert.c_hat;
  auto is_fib_pair = [](const Mode& k) {
    long a = 1, b = 1;
    while (b <= k[0]) {
      if (k[0] == b && k[1] == -a) return true;
      long c = a + b;
      a = b;
      b = c;
    }
    return k[0] == 1 && k[1] == -1;
  };
  auto resonant = estimate_constant(Vec{1.0, 1.0, 0.0}, 1.0, 2, 2);
  const bool ok = c2 >= 0.70 && c2 <= 0.7237 && is_fib_pair(cert.argmin) &&
                  resonant.c_hat == 0.0 && resonant.argmin == Mode{1, -1, 0};
  report(6, ok, "golden direction certified, rational direction resonant",
         "c_hat " + std::to_string(cert.c_hat) + " (squared " + std::to_string(c2) +
             ") at (" + std::to_string(cert.argmin[0]) + "," +
             std::to_string(cert.argmin[1]) + "); (1,1) gives " +
             std::to_string(resonant.c_hat),
         timer.seconds());
}

// 7. Vieta identities and the mode-level semigroup property.
void criterion_vieta_semigroup() {
  Timer timer;
  std::mt19937_64 rng(777);
  std::uniform_int_distribution<int> ki(-50, 50);
  std::uniform_real_distribution<double> br(0.1, 3.0), tr(0.05, 1.5);
  double worst_vieta = 0.0, worst_semi = 0.0;
  int modes = 0;
  while (modes < 1000) {
    Mode k{ki(rng), ki(rng), 0};
    if (is_zero(k)) continue;
    ++modes;
    Vec bt{br(rng), br(rng), 0.0};
    ModeExponents me = mode_exponents(k, bt);
    const double k2 = norm2(k);
    const double d = std::pow(dot(bt, k), 2);
    worst_vieta = std::max(worst_vieta, std::abs(me.lambda1 + me.lambda2 + k2) / k2);
    worst_vieta =
        std::max(worst_vieta, std::abs(me.lambda1 * me.lambda2 - d) / std::max(d, 1.0));

    // in (phi, phi') coordinates the damped-wave propagator is
    //   M(t) = [[L1 + a L2, L2], [-d L2, L1 - a L2]]        (a = |k|^2 / 2)
    // i.e. exp(t [[0, 1], [-d, -2a]]); composition must match M(t + s)
    const double a = 0.5 * k2;
    const double t = tr(rng), s = tr(rng);
    auto M = [&](double tau) {
      auto [L1, L2] = detail::kernel_values_raw(a, d, tau);
      return std::array<double, 4>{L1 + a * L2, L2, -d * L2, L1 - a * L2};
    };
    auto mt = M(t), ms = M(s), mts = M(t + s);
    std::array<double, 4> prod{mt[0] * ms[0] + mt[1] * ms[2], mt[0] * ms[1] + mt[1] * ms[3],
                               mt[2] * ms[0] + mt[3] * ms[2], mt[2] * ms[1] + mt[3] * ms[3]};
    double scale = 0.0, diff = 0.0;
    for (int i = 0; i < 4; ++i) {
      scale = std::max(scale, std::abs(mts[i]));
      diff = std::max(diff, std::abs(prod[i] - mts[i]));
    }
    worst_semi = std::max(worst_semi, diff / std::max(scale, 1e-300));
  }
  report(7, worst_vieta <= 1e-10 && worst_semi <= 1e-10,
         "Vieta and semigroup identities on 1000 random modes",
         "worst Vieta " + std::to_string(worst_vieta) + ", worst composition " +
             std::to_string(worst_semi),
         timer.seconds());
}

}  // namespace

int main() {
  criterion_kernel_bounds();
  criterion_propagator_oracle();
  criterion_formulation_equivalence();
  criterion_linear_decay();
  criterion_nonlinear_stability();
  criterion_diophantine();
  criterion_vieta_semigroup();
  if (g_failures == 0) {
    std::printf("all 7 acceptance criteria passed\n");
  } else {
    std::printf("%d acceptance criteria FAILED\n", g_failures);
  }
  return g_failures;
}
