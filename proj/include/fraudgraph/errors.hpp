#pragma once

#include <stdexcept>
#include <string>

namespace fraudgraph {

// Invalid configuration, parameters or names supplied by the caller.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Filesystem or parse failures while reading or writing bundles.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A graph, bundle or generated dataset failed an integrity check.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fraudgraph
