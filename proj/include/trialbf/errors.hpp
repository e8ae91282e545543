#pragma once

#include <stdexcept>
#include <string>

namespace trialbf {

/// Base class for all trialbf errors.
class error : public std::runtime_error {
public:
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid numeric input or unusable data (bad interval, estimate <= 0, ...).
class domain_error : public error {
public:
  using error::error;
};

/// Invalid run configuration (empty grids, unsorted axes, bad options).
class config_error : public error {
public:
  using error::error;
};

/// Filesystem failure.
class io_error : public error {
public:
  using error::error;
};

/// The verification quadrature failed to converge.
class oracle_failure : public error {
public:
  using error::error;
};

}  // namespace trialbf
