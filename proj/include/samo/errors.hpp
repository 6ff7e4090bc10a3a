#pragma once

#include <stdexcept>
#include <string>

namespace samo {

// Bad shapes, unknown names, out-of-range indices or config values.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Non-finite gradients or losses.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Arguments outside a function's mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// API misuse such as stepping a finished episode.
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Malformed checkpoint, map or metrics files.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace samo
