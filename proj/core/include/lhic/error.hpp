#pragma once

#include <stdexcept>
#include <string>

namespace lhic {

enum class ErrorKind {
  Usage,          // bad arguments / configuration
  Io,             // file system, image parsing
  Codec,          // external tool or built-in codec failure
  ModelMismatch,  // bitstream refers to a different model
  Shape,          // tensor / image dimension mismatch
  Format,         // container or checkpoint parse failure
  Numeric,        // NaN or out-of-domain values
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

  // Process exit code used by the CLI front end.
  int exit_code() const {
    switch (kind_) {
      case ErrorKind::Usage: return 1;
      case ErrorKind::Io: return 2;
      case ErrorKind::Codec: return 3;
      case ErrorKind::ModelMismatch: return 4;
      default: return 1;
    }
  }

 private:
  ErrorKind kind_;
};

}  // namespace lhic
