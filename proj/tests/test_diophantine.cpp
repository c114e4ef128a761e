#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mhdlab/diophantine.hpp"
#include "mhdlab/random.hpp"

using namespace mhdlab;

namespace {
const double phi = 0.5 * (1.0 + std::sqrt(5.0));
}

TEST_CASE("estimate_constant agrees with an independent brute force") {
  // oracle: scan the raw ball (both representatives of every pair) with a
  // flat loop, no canonicalization
  auto brute = [](const Vec& bt, double r, int K) {
    double best = std::numeric_limits<double>::infinity();
    for (int k1 = -K; k1 <= K; ++k1)
      for (int k2 = -K; k2 <= K; ++k2) {
        if (k1 == 0 && k2 == 0) continue;
        Mode k{k1, k2, 0};
        best = std::min(best, std::abs(dot(bt, k)) * std::pow(norm2(k), 0.5 * r));
      }
    return best;
  };
  for (auto bt : {golden_vector(2), Vec{1.0, std::sqrt(2.0), 0.0}, Vec{0.3, 1.7, 0.0}}) {
    for (double r : {1.0, 1.1, 1.5}) {
      auto cert = estimate_constant(bt, r, 2, 30);
      CHECK(cert.c_hat == Catch::Approx(brute(bt, r, 30)).epsilon(1e-15));
    }
  }
}

TEST_CASE("rational directions are certified resonant") {
  auto cert = estimate_constant(Vec{1.0, 1.0, 0.0}, 1.0, 2, 2);
  CHECK(cert.c_hat == 0.0);
  CHECK(cert.argmin == Mode{1, -1, 0});

  // any vector with a zero component resonates in 3D
  auto cert3 = estimate_constant(Vec{1.0, 0.0, 1.0}, 2.5, 3, 3);
  CHECK(cert3.c_hat == 0.0);
  CHECK(cert3.argmin == Mode{0, 1, 0});
}

TEST_CASE("golden-ratio direction: value, Fibonacci argmins, monotonicity") {
  auto cert = estimate_constant(golden_vector(2), 1.0, 2, 1000);
  // with the Euclidean weight the Fibonacci-pair values converge (from
  // alternating sides) to sqrt(phi/sqrt(5)) ~ 0.8506508; the squared constant
  // converges to phi/sqrt(5) ~ 0.72361
  CHECK(cert.c_hat * cert.c_hat >= 0.70);
  CHECK(cert.c_hat * cert.c_hat <= 0.7237);
  CHECK(cert.c_hat == Catch::Approx(std::sqrt(phi / std::sqrt(5.0))).epsilon(1e-9));

  // every record minimum past the first sits on a Fibonacci pair (F_{m+1}, -F_m)
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
  CHECK(is_fib_pair(cert.argmin));
  int fib_records = 0;
  for (const auto& [k, value] : cert.frontier)
    if (is_fib_pair(k)) ++fib_records;
  CHECK(fib_records >= int(cert.frontier.size()) - 1);

  // enlarging the ball can only lower the certified constant
  double prev = std::numeric_limits<double>::infinity();
  for (int K : {10, 100, 1000}) {
    double c = estimate_constant(golden_vector(2), 1.0, 2, K).c_hat;
    CHECK(c <= prev);
    prev = c;
  }
}

TEST_CASE("3D cube-root direction is certified non-resonant") {
  auto cert = estimate_constant(golden_vector(3), 2.1, 3, 20);
  CHECK(cert.c_hat > 0.0);
}

TEST_CASE("estimate_constant rejects bad arguments") {
  CHECK_THROWS_AS(estimate_constant(golden_vector(2), 1.1, 2, 0), contract_error);
  CHECK_THROWS_AS(estimate_constant(golden_vector(2), -0.5, 2, 10), contract_error);
}

TEST_CASE("classify_mode reproduces hand-computed regions") {
  Vec bt = golden_vector(2);
  // b~.k = 1, |k| = 1: D = -3
  CHECK(classify_mode(Mode{1, 0, 0}, bt) == Region::S1);
  // (b~.k)^2 = (1-2phi)^2 = 5, |k|^2 = 5: D = 1 - 4*5/25 = 1/5
  CHECK(classify_mode(Mode{1, -2, 0}, bt) == Region::S2);
  CHECK(discriminant(Mode{1, -2, 0}, bt) == Catch::Approx(0.2).epsilon(1e-12));
  // (b~.k)^2 = 5 - 3phi ~ 0.1459, |k|^2 = 5: D ~ 0.9767
  CHECK(classify_mode(Mode{2, -1, 0}, bt) == Region::S3);
  CHECK(discriminant(Mode{2, -1, 0}, bt) ==
        Catch::Approx(1.0 - 4.0 * (5.0 - 3.0 * phi) / 25.0).epsilon(1e-12));
}

TEST_CASE("classify_mode boundary conventions") {
  // D = 0 exactly: b~ = (1/2, 0), k = (1, 0) gives 4 d / k^4 = 1
  CHECK(discriminant(Mode{1, 0, 0}, Vec{0.5, 0.0, 0.0}) == 0.0);
  CHECK(classify_mode(Mode{1, 0, 0}, Vec{0.5, 0.0, 0.0}) == Region::S1);
  // D = 1/4 exactly: k = (3,4), |k|^2 = 25, engineered so b~.k evaluates to
  // sqrt(117.1875) without rounding (117.1875 = (3/16) * 25^2 and the square
  // of its rounded root is exact)
  double v = std::sqrt(117.1875);
  Vec bt{0.25, (v - 0.75) / 4.0, 0.0};
  REQUIRE(dot(bt, Mode{3, 4, 0}) == v);
  CHECK(discriminant(Mode{3, 4, 0}, bt) == 0.25);
  CHECK(classify_mode(Mode{3, 4, 0}, bt) == Region::S2);
  CHECK_THROWS_AS(classify_mode(Mode{0, 0, 0}, bt), contract_error);
}

TEST_CASE("golden_vector components") {
  Vec g2 = golden_vector(2);
  CHECK(g2[0] == 1.0);
  CHECK(g2[1] == Catch::Approx(phi).epsilon(1e-15));
  CHECK(g2[2] == 0.0);
  Vec g3 = golden_vector(3);
  CHECK(g3[1] == Catch::Approx(std::cbrt(2.0)).epsilon(1e-15));
  CHECK(g3[2] == Catch::Approx(std::cbrt(4.0)).epsilon(1e-15));
  CHECK_THROWS_AS(golden_vector(4), contract_error);
}

TEST_CASE("Poincare inequality holds on band-limited fields") {
  TorusGrid g(2, 32);
  BackgroundField bg = certify_background(golden_vector(2), 1.1, 2, g.K_dealias);
  REQUIRE(bg.c_hat > 0.0);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    SpectralField f = make_random_field(g, 2, double(g.K_dealias), seed);
    auto chk = verify_poincare(f, bg, 1.0);
    CHECK(chk.holds);
    CHECK(chk.ratio <= 1.0 / bg.c_hat * (1.0 + 1e-12));
  }
}

TEST_CASE("Poincare ratio saturates on the certifying mode") {
  TorusGrid g(2, 64);
  BackgroundField bg = certify_background(golden_vector(2), 1.1, 2, g.K_dealias);
  auto cert = estimate_constant(golden_vector(2), 1.1, 2, g.K_dealias);
  SpectralField f(g, 1);
  f.at(0, cert.argmin) = cplx{1.0, 0.0};
  Mode mk{-cert.argmin[0], -cert.argmin[1], -cert.argmin[2]};
  f.at(0, mk) = cplx{1.0, 0.0};
  auto chk = verify_poincare(f, bg, 1.0);
  CHECK(chk.holds);
  CHECK(chk.ratio == Catch::Approx(1.0 / bg.c_hat).epsilon(1e-12));
}
