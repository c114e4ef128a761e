#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "mhdlab/field.hpp"
#include "mhdlab/grid.hpp"
#include "mhdlab/operators.hpp"

namespace mhdlab {

// Equilibrium magnetic vector with its Diophantine exponent r and the
// constant c_hat certified by exhaustive search over the ball |k|_inf <= K_cert.
// c_hat = 0 signals a resonant (non-Diophantine) direction.
struct BackgroundField {
  Vec b_tilde{1.0, 0.0, 0.0};
  double r = 1.1;
  double c_hat = 0.0;
  int K_cert = 0;
};

// Frequency regions of the damped-wave discriminant D = 1 - 4 (b~.k)^2/|k|^4.
// Boundary convention: D = 0 -> S1, D = 1/4 -> S2.
enum class Region { S1, S2, S3 };

inline const char* region_name(Region s) {
  switch (s) {
    case Region::S1: return "S1";
    case Region::S2: return "S2";
    default: return "S3";
  }
}

inline double discriminant(const Mode& k, const Vec& b_tilde) {
  double k2 = norm2(k);
  double bk = dot(b_tilde, k);
  return 1.0 - 4.0 * bk * bk / (k2 * k2);
}

inline Region classify_mode(const Mode& k, const Vec& b_tilde) {
  if (is_zero(k)) throw contract_error("classify_mode: k = 0 has no region");
  double D = discriminant(k, b_tilde);
  if (D <= 0.0) return Region::S1;
  if (D <= 0.25) return Region::S2;
  return Region::S3;
}

struct DiophantineCertificate {
  double c_hat = 0.0;       // min over 0 < |k|_inf <= K_max of |b~.k| |k|^r
  Mode argmin{0, 0, 0};     // witnessing mode (canonical: first nonzero entry > 0)
  // successive record minima met during the enumeration, for reporting
  std::vector<std::pair<Mode, double>> frontier;
};

// Exhaustive certification of the Diophantine constant on a finite ball.
// The weighted value is even under k -> -k, so only canonical representatives
// are enumerated; ties break to the lexicographically smallest mode.
inline DiophantineCertificate estimate_constant(const Vec& b_tilde, double r, int n,
                                                int K_max) {
  if (K_max < 1) throw contract_error("estimate_constant: K_max must be >= 1");
  // The decay theory needs r > n - 1, but the enumeration is well defined for
  // any nonnegative exponent (and borderline r = n - 1 probes badly
  // approximable directions); experiment configs stay strict.
  if (r < 0.0) throw contract_error("estimate_constant: r must be nonnegative");
  DiophantineCertificate cert;
  double best = std::numeric_limits<double>::infinity();
  Mode best_k{0, 0, 0};
  const int lo = -K_max, hi = K_max;
  Mode k{0, 0, 0};
  for (k[0] = lo; k[0] <= hi; ++k[0]) {
    for (k[1] = lo; k[1] <= hi; ++k[1]) {
      const int lo2 = (n == 3) ? lo : 0;
      const int hi2 = (n == 3) ? hi : 0;
      for (k[2] = lo2; k[2] <= hi2; ++k[2]) {
        if (is_zero(k) || !is_canonical(k)) continue;
        double value = std::abs(dot(b_tilde, k)) * std::pow(norm2(k), 0.5 * r);
        if (value < best || (value == best && lex_less(k, best_k))) {
          best = value;
          best_k = k;
          cert.frontier.emplace_back(k, value);
        }
      }
    }
  }
  cert.c_hat = best;
  cert.argmin = best_k;
  return cert;
}

inline BackgroundField certify_background(const Vec& b_tilde, double r, int n, int K_cert) {
  BackgroundField bg;
  bg.b_tilde = b_tilde;
  bg.r = r;
  bg.K_cert = K_cert;
  bg.c_hat = estimate_constant(b_tilde, r, n, K_cert).c_hat;
  return bg;
}

// Concrete Diophantine candidates: the golden ratio in 2D, cube roots of two
// in 3D.  The 3D vector carries no theoretical guarantee; it is certified
// empirically through estimate_constant.
inline Vec golden_vector(int n) {
  if (n == 2) return Vec{1.0, 0.5 * (1.0 + std::sqrt(5.0)), 0.0};
  if (n == 3) return Vec{1.0, std::cbrt(2.0), std::cbrt(4.0)};
  throw contract_error("golden_vector: dimension must be 2 or 3");
}

struct PoincareCheck {
  bool holds = false;
  double ratio = 0.0;  // ||f||_{H^s dot} / ||b~.grad f||_{H^{s+r} dot}
};

// Poincare-type inequality ||f||_{Hs dot} <= (1/c_hat) ||b~.grad f||_{H(s+r) dot}
// for mean-zero fields band-limited inside the certified ball.
inline PoincareCheck verify_poincare(const SpectralField& f, const BackgroundField& bg,
                                     double s) {
  if (max_mean_mode(f) != 0.0)
    throw contract_error("verify_poincare: field must be mean-zero");
  if (!is_band_limited(f, bg.K_cert))
    throw contract_error("verify_poincare: field must be band-limited inside K_cert");
  double num = sobolev_norm(f, s, true);
  double den = sobolev_norm(directional_derivative(f, bg.b_tilde), s + bg.r, true);
  if (den == 0.0) throw contract_error("verify_poincare: zero field");
  PoincareCheck out;
  out.ratio = num / den;
  out.holds = bg.c_hat > 0.0 && out.ratio <= 1.0 / bg.c_hat * (1.0 + 1e-12);
  return out;
}

}  // namespace mhdlab
