#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace npkernel {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed input files or command-line values.
class ParseError : public Error {
public:
  using Error::Error;
};

// A Graph or Dataset violates one or more structural invariants.
class ValidationError : public Error {
public:
  explicit ValidationError(std::vector<std::string> diagnostics)
      : Error(join(diagnostics)), diagnostics_(std::move(diagnostics)) {}

  const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

private:
  static std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
      if (!out.empty()) out += "; ";
      out += p;
    }
    return out;
  }

  std::vector<std::string> diagnostics_;
};

// Failures while evaluating kernels or assembling Gram matrices.
class ComputeError : public Error {
public:
  using Error::Error;
};

}  // namespace npkernel
