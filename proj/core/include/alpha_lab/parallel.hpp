// Copyright 2026 The alpha-lab Authors
// SPDX-License-Identifier: Apache-2.0

// Index-parallel loops and per-task seed derivation. Results are written by
// index, so output never depends on scheduling.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace alpha_lab {

/// Worker count: ALPHA_LAB_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t thread_count();

/// Calls body(i) for i in [0, n). If any call throws, the exception from the
/// lowest failing index is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Derives an independent 64-bit seed for task `index` under `master`.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) noexcept;

}  // namespace alpha_lab
