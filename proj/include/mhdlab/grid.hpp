#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "mhdlab/errors.hpp"

namespace mhdlab {

// Integer frequency and real vectors on the torus.  Always three slots;
// for n = 2 the last entry is zero and ignored.
using Mode = std::array<int, 3>;
using Vec = std::array<double, 3>;

inline double dot(const Vec& b, const Mode& k) {
  return b[0] * k[0] + b[1] * k[1] + b[2] * k[2];
}

inline double norm2(const Mode& k) {
  return double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2];
}

inline double norm(const Mode& k) { return std::sqrt(norm2(k)); }

inline double norm(const Vec& v) {
  return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

inline int linf(const Mode& k) {
  int m = 0;
  for (int c : k) m = std::max(m, std::abs(c));
  return m;
}

inline bool is_zero(const Mode& k) { return k[0] == 0 && k[1] == 0 && k[2] == 0; }

// Lexicographic order on frequency tuples; used for deterministic tie-breaks.
inline bool lex_less(const Mode& a, const Mode& b) {
  for (int i = 0; i < 3; ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

// Canonical representative of the {k, -k} pair: first nonzero entry positive.
inline bool is_canonical(const Mode& k) {
  for (int c : k) {
    if (c != 0) return c > 0;
  }
  return false;  // k = 0 has no canonical form
}

// Uniform grid on [0, 2pi)^n with the full symmetric frequency band
// |k_i| <= N/2 retained.  Dealiasing cutoff follows the 2/3 rule.
struct TorusGrid {
  int n = 2;          // spatial dimension, 2 or 3
  int N = 64;         // points per dimension, even
  int K_dealias = 0;  // = floor(N/3)

  TorusGrid() : TorusGrid(2, 64) {}

  TorusGrid(int n_, int N_) : n(n_), N(N_), K_dealias(N_ / 3) {
    if (n != 2 && n != 3) throw config_error("grid dimension must be 2 or 3");
    if (N < 8 || N % 2 != 0)
      throw config_error("grid size N must be even and >= 8, got " + std::to_string(N));
  }

  std::size_t size() const {
    std::size_t v = 1;
    for (int d = 0; d < n; ++d) v *= std::size_t(N);
    return v;
  }

  // Flat index <-> integer frequency.  Index i along an axis carries the
  // frequency i for i <= N/2 and i - N beyond (so index N/2 is +N/2).
  Mode freq(std::size_t idx) const {
    Mode k{0, 0, 0};
    for (int d = n - 1; d >= 0; --d) {
      int i = int(idx % std::size_t(N));
      idx /= std::size_t(N);
      k[d] = (i <= N / 2) ? i : i - N;
    }
    return k;
  }

  std::size_t index(const Mode& k) const {
    std::size_t idx = 0;
    for (int d = 0; d < n; ++d) {
      int i = k[d] >= 0 ? k[d] : k[d] + N;
      idx = idx * std::size_t(N) + std::size_t(i);
    }
    return idx;
  }

  // Index of the conjugate partner -k (mod N per axis).
  std::size_t conj_index(std::size_t idx) const {
    std::size_t out = 0;
    std::size_t rest = idx;
    std::array<int, 3> ii{0, 0, 0};
    for (int d = n - 1; d >= 0; --d) {
      ii[d] = int(rest % std::size_t(N));
      rest /= std::size_t(N);
    }
    for (int d = 0; d < n; ++d) {
      int j = (N - ii[d]) % N;
      out = out * std::size_t(N) + std::size_t(j);
    }
    return out;
  }

  bool operator==(const TorusGrid& o) const { return n == o.n && N == o.N; }
};

}  // namespace mhdlab
