#pragma once

#include <stdexcept>
#include <string>

namespace mhdlab {

// Bad user input: malformed config file, out-of-range parameter.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// A precondition of an operation was violated by the caller.
class contract_error : public std::logic_error {
 public:
  explicit contract_error(const std::string& what) : std::logic_error(what) {}
};

// The numerics blew up (NaN/Inf in products, CFL violation).
class divergence_error : public std::runtime_error {
 public:
  explicit divergence_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mhdlab
