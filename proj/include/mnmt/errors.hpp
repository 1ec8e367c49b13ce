#pragma once

#include <stdexcept>

namespace mnmt {

// Error taxonomy shared by every module. Plain std::invalid_argument is
// thrown for contract violations on in-memory arguments; the types below
// cover file, data and numeric failures and map onto CLI exit codes.

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidFormat : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mnmt
