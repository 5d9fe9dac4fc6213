// Copyright 2026 The alpha-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "alpha_lab/alpha.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace alpha_lab {

Alpha::Alpha(double value) {
  if (std::isnan(value) || !(value > 0.0)) {
    throw ArgumentError("alpha must be strictly positive, got " + std::to_string(value));
  }
  if (std::isinf(value)) {
    infinite_ = true;
    value_ = std::numeric_limits<double>::infinity();
  } else {
    value_ = value;
  }
}

Alpha Alpha::infinity() noexcept {
  Alpha a;
  a.infinite_ = true;
  a.value_ = std::numeric_limits<double>::infinity();
  return a;
}

namespace {

double parse_number(std::string_view text) {
  double out = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last) {
    throw ArgumentError("cannot parse alpha value '" + std::string(text) + "'");
  }
  return out;
}

}  // namespace

Alpha Alpha::parse(std::string_view text) {
  std::string lowered;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (lowered == "inf" || lowered == "infinity" || lowered == "+inf") {
    return Alpha::infinity();
  }
  if (auto slash = lowered.find('/'); slash != std::string::npos) {
    const double num = parse_number(std::string_view(lowered).substr(0, slash));
    const double den = parse_number(std::string_view(lowered).substr(slash + 1));
    if (den == 0.0) throw ArgumentError("alpha fraction has zero denominator");
    return Alpha(num / den);
  }
  return Alpha(parse_number(lowered));
}

bool Alpha::is_log_loss() const noexcept {
  return !infinite_ && std::abs(value_ - 1.0) <= kLogLossBand;
}

double Alpha::value() const noexcept { return value_; }

double Alpha::inverse() const noexcept {
  if (infinite_) return 0.0;
  if (is_log_loss()) return 1.0;
  return 1.0 / value_;
}

std::string Alpha::to_string() const {
  if (infinite_) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << value_;
  return os.str();
}

}  // namespace alpha_lab
