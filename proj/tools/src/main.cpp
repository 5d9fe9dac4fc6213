// Copyright 2026 The alpha-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "alpha_lab_cli/cli.hpp"

int main(int argc, char** argv) { return alpha_lab::cli::run(argc, argv, std::cout, std::cerr); }
