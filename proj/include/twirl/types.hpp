#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace twirl {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Failure categories surfaced by the library. The CLI maps these onto exit
/// codes (validation problems exit 2, failed certificates exit 3).
enum class ErrorCode {
  invalid_parameter,
  size_limit,
  invalid_table,
  not_a_group,
  invalid_action,
  inconsistent_representation,
  degenerate_commutant_element,
  decomposition_inconsistent,
  not_trace_preserving,
  not_completely_positive,
  not_a_frame,
  witness_failed,
  construction_failed,
  frame_not_retrievable,
  equivalence_violation,
  io_error,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// Certificate-style failures, as opposed to malformed input.
  bool is_certificate_failure() const noexcept {
    return code_ == ErrorCode::witness_failed || code_ == ErrorCode::decomposition_inconsistent ||
           code_ == ErrorCode::equivalence_violation;
  }

 private:
  ErrorCode code_;
};

}  // namespace twirl
