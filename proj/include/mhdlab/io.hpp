#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "mhdlab/errors.hpp"
#include "mhdlab/solver.hpp"

namespace mhdlab {

// Decimal formatting used in every CSV cell: 17 significant digits, enough
// to round-trip a double exactly.
inline std::string csv_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
      : out_(path), columns_(header.size()) {
    if (!out_) throw config_error("cannot open CSV output: " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out_ << ',';
      out_ << header[i];
    }
    out_ << '\n';
  }

  void row(const std::vector<double>& values) {
    if (values.size() != columns_) throw contract_error("CsvWriter: column count mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out_ << ',';
      out_ << csv_double(values[i]);
    }
    out_ << '\n';
  }

  void row_mixed(const std::vector<std::string>& values) {
    if (values.size() != columns_) throw contract_error("CsvWriter: column count mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out_ << ',';
      out_ << values[i];
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
  std::size_t columns_;
};

// Snapshot layout (little-endian, for restarts):
//   8 bytes magic "MHDSNAP1"
//   int32 n, int32 N
//   float64 t, mu, nu, b_tilde[3], r, c_hat; int32 K_cert
//   coefficients of u then b, component-major, float64 (re, im) pairs
namespace detail {

template <typename T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void get(std::ifstream& in, T& v) {
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
}

}  // namespace detail

inline void write_snapshot(const std::filesystem::path& path, const SimState& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot open snapshot for writing: " + path.string());
  out.write("MHDSNAP1", 8);
  detail::put(out, std::int32_t(s.u_hat.grid.n));
  detail::put(out, std::int32_t(s.u_hat.grid.N));
  detail::put(out, s.t);
  detail::put(out, s.mu);
  detail::put(out, s.nu);
  for (double v : s.bg.b_tilde) detail::put(out, v);
  detail::put(out, s.bg.r);
  detail::put(out, s.bg.c_hat);
  detail::put(out, std::int32_t(s.bg.K_cert));
  for (const SpectralField* f : {&s.u_hat, &s.b_hat}) {
    for (const cplx& c : f->coeffs) {
      detail::put(out, c.real());
      detail::put(out, c.imag());
    }
  }
}

inline SimState read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open snapshot: " + path.string());
  char magic[8];
  in.read(magic, 8);
  if (std::memcmp(magic, "MHDSNAP1", 8) != 0)
    throw config_error("not a snapshot file: " + path.string());
  std::int32_t n = 0, N = 0, K_cert = 0;
  detail::get(in, n);
  detail::get(in, N);
  SimState s;
  s.u_hat = SpectralField(TorusGrid(n, N), n);
  s.b_hat = SpectralField(TorusGrid(n, N), n);
  detail::get(in, s.t);
  detail::get(in, s.mu);
  detail::get(in, s.nu);
  for (double& v : s.bg.b_tilde) detail::get(in, v);
  detail::get(in, s.bg.r);
  detail::get(in, s.bg.c_hat);
  detail::get(in, K_cert);
  s.bg.K_cert = K_cert;
  for (SpectralField* f : {&s.u_hat, &s.b_hat}) {
    for (cplx& c : f->coeffs) {
      double re = 0.0, im = 0.0;
      detail::get(in, re);
      detail::get(in, im);
      c = cplx{re, im};
    }
    f->mean_zero = true;
    f->div_free = true;
  }
  if (!in) throw config_error("truncated snapshot: " + path.string());
  return s;
}

}  // namespace mhdlab
