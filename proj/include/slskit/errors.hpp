#pragma once

#include <stdexcept>
#include <string>

namespace slskit {

// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionMismatch : public Error {
  public:
    explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

class InvalidArgument : public Error {
  public:
    explicit InvalidArgument(const std::string& what) : Error(what) {}
};

// Optimization problem has no feasible point; carries the residual of the
// best least-squares attempt so callers can gauge how badly it failed.
class InfeasibleSynthesis : public Error {
  public:
    InfeasibleSynthesis(const std::string& what, double max_residual)
        : Error(what + " (max equality residual " + std::to_string(max_residual) + ")"),
          max_residual_(max_residual) {}

    double max_residual() const { return max_residual_; }

  private:
    double max_residual_;
};

class NumericalFailure : public Error {
  public:
    explicit NumericalFailure(const std::string& what) : Error(what) {}
};

class UnstablePlant : public Error {
  public:
    explicit UnstablePlant(const std::string& what) : Error(what) {}
};

class UnsupportedFeedthrough : public Error {
  public:
    explicit UnsupportedFeedthrough(const std::string& what) : Error(what) {}
};

class NonConvexObjective : public Error {
  public:
    explicit NonConvexObjective(const std::string& what) : Error(what) {}
};

class ConstructionError : public Error {
  public:
    explicit ConstructionError(const std::string& what) : Error(what) {}
};

// Text input (config or matrix files) failed to parse; message carries the
// offending line.
class ParseError : public Error {
  public:
    explicit ParseError(const std::string& what) : Error(what) {}
};

}  // namespace slskit
