// Copyright 2026 The alpha-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace alpha_lab {

/// Raised for malformed or out-of-contract arguments (bad index, empty data,
/// dimension mismatch, parameter outside its admissible range).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a mathematically defined quantity is infinite or undefined for
/// the given inputs, e.g. the loss of a zero-probability label for alpha <= 1.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when an iterative procedure produces a non-finite value.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Half-width of the band around alpha = 1 that is evaluated with the
/// log-loss formulas instead of the alpha/(alpha-1) form.
inline constexpr double kLogLossBand = 1e-9;

/// Tuning parameter of the alpha-loss family, alpha in (0, +inf].
class Alpha {
 public:
  /// Throws ArgumentError unless value > 0. +inf maps to Alpha::infinity().
  explicit Alpha(double value);

  static Alpha infinity() noexcept;

  /// Accepts decimal numbers, fractions "p/q", and "inf" / "infinity".
  static Alpha parse(std::string_view text);

  bool is_infinite() const noexcept { return infinite_; }
  /// True when the value sits within kLogLossBand of 1.
  bool is_log_loss() const noexcept;
  /// Finite value, or +inf.
  double value() const noexcept;
  /// 1/alpha with 1/inf = 0; exactly 1 inside the log-loss band.
  double inverse() const noexcept;
  /// 1 - 1/alpha, the exponent that appears throughout the loss formulas.
  double exponent() const noexcept { return 1.0 - inverse(); }

  std::string to_string() const;

  friend bool operator==(const Alpha& a, const Alpha& b) noexcept {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

 private:
  Alpha() = default;
  double value_ = 1.0;
  bool infinite_ = false;
};

}  // namespace alpha_lab
