#pragma once

#include <stdexcept>
#include <string>

namespace spectrumlab {

// Invalid or inconsistent scenario configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Out-of-domain argument to a numeric routine (zero distance, negative SINR, ...).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Violation of the environment stepping protocol (wrong tiers acting, missing actions).
class ProtocolError : public std::runtime_error {
 public:
  explicit ProtocolError(const std::string& what) : std::runtime_error(what) {}
};

// NOMA power fractions that break the successive-cancellation decode order.
class SicFeasibilityError : public std::runtime_error {
 public:
  explicit SicFeasibilityError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite value encountered during training.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace spectrumlab
