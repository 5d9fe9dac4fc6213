// Copyright 2026 The alpha-lab Authors
// SPDX-License-Identifier: Apache-2.0

// The alpha-lab command line: subcommand dispatch, configuration loading and
// the CSV output contract.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "alpha_lab/alpha.hpp"
#include "alpha_lab/gmm.hpp"

namespace alpha_lab::cli {

enum ExitCode : int {
  kSuccess = 0,
  kConfigError = 2,
  kNumericFailure = 3,
  kAuditViolation = 4,
};

/// Runs the command line; never throws. argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// 17 significant digits; "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double v);

/// Comma-separated alpha values; each entry accepts "inf" and fractions such as "1/2".
std::vector<Alpha> parse_alpha_list(std::string_view text);
std::vector<double> parse_number_list(std::string_view text);

/// "binomial:n,p" or a path to a file holding a JSON array or whitespace /
/// comma separated masses. Masses must be non-negative and sum to 1 within 1e-9.
std::vector<double> load_pmf(std::string_view source);

/// "preset:symmetric", "preset:skewed_landscape", "preset:shared_covariance"
/// or a path to a JSON mixture description.
GmmSpec load_gmm(std::string_view source);
GmmSpec parse_gmm_json(std::string_view text);

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

/// Comment lines written at the top of every output file.
struct Manifest {
  std::string subcommand;
  std::string config;
  std::uint64_t seed = 0;
  std::string output;
  std::vector<std::pair<std::string, std::string>> extra;

  std::string header() const;
};

}  // namespace alpha_lab::cli
