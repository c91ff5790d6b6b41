#pragma once

#include <stdexcept>
#include <string>

namespace tomolab {

// Fock cutoff would exceed the hard cap (extreme state parameters).
class truncation_overflow : public std::runtime_error {
  public:
    explicit truncation_overflow(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed state descriptor string; message names the offending field.
class parse_error : public std::runtime_error {
  public:
    explicit parse_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Quadrature grid does not contain the state (boundary mass or normalization
// check failed).
class grid_error : public std::runtime_error {
  public:
    explicit grid_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Kullback-Leibler integrand is undefined: g vanishes on a region where f
// carries mass (genuinely disjoint supports).
class support_violation : public std::runtime_error {
  public:
    explicit support_violation(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace tomolab
