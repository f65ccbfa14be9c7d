#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace oit {

// Exit codes shared by the command-line front end.
enum class ExitCode : int {
    Success = 0,
    Usage = 1,
    Numerical = 2,
    Validation = 3,
};

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
    [[nodiscard]] virtual ExitCode exit_code() const noexcept { return ExitCode::Usage; }
};

class InvalidInput : public Error {
  public:
    using Error::Error;
};

// A density value that must be strictly positive was not.
class PositivityError : public Error {
  public:
    using Error::Error;
};

// Input carries no usable information (all-zero field, constant field where
// variation is required, every histogram bin merged away).
class DegenerateInput : public Error {
  public:
    using Error::Error;
};

// Malformed or truncated OITF/OITM/config input.
class FormatError : public Error {
  public:
    using Error::Error;
};

class NumericalError : public Error {
  public:
    using Error::Error;
    [[nodiscard]] ExitCode exit_code() const noexcept override { return ExitCode::Numerical; }
};

// The transport map stopped being orientation preserving at some step.
class OrientationLoss : public NumericalError {
  public:
    OrientationLoss(std::size_t step, double min_det)
        : NumericalError("Jacobian determinant " + std::to_string(min_det) + " <= 0 at step " +
                         std::to_string(step) + "; increase the number of time steps"),
          step_(step), min_det_(min_det) {}

    [[nodiscard]] std::size_t step() const noexcept { return step_; }
    [[nodiscard]] double min_det() const noexcept { return min_det_; }

  private:
    std::size_t step_;
    double min_det_;
};

class NumericalBlowup : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

}  // namespace oit
