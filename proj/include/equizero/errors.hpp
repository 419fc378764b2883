#pragma once

#include <stdexcept>
#include <string>

namespace equizero {

// Every thrown error carries a stable machine-readable code alongside the
// human message; the CLI maps these onto its error JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

class ArgumentError : public Error {
 public:
  explicit ArgumentError(const std::string& msg) : Error("argument", msg) {}
};

class UnimplementedDomainError : public Error {
 public:
  explicit UnimplementedDomainError(const std::string& msg)
      : Error("unimplemented-domain", msg) {}
};

class RegionMismatchError : public Error {
 public:
  explicit RegionMismatchError(const std::string& msg)
      : Error("region-mismatch", msg) {}
};

class InsufficientResolutionError : public Error {
 public:
  InsufficientResolutionError(const std::string& msg, int minimum_resolution)
      : Error("insufficient-resolution", msg),
        minimum_resolution_(minimum_resolution) {}
  int minimum_resolution() const { return minimum_resolution_; }

 private:
  int minimum_resolution_;
};

class ConditioningError : public Error {
 public:
  ConditioningError(const std::string& msg, double smallest_eigenvalue_estimate)
      : Error("conditioning", msg), lambda_min_(smallest_eigenvalue_estimate) {}
  double smallest_eigenvalue_estimate() const { return lambda_min_; }

 private:
  double lambda_min_;
};

class CapacityError : public Error {
 public:
  explicit CapacityError(const std::string& msg) : Error("capacity", msg) {}
};

class DegenerateSampleError : public Error {
 public:
  explicit DegenerateSampleError(const std::string& msg)
      : Error("degenerate-sample", msg) {}
};

class StepError : public Error {
 public:
  explicit StepError(const std::string& msg) : Error("step", msg) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& msg) : Error("validation", msg) {}
};

}  // namespace equizero
