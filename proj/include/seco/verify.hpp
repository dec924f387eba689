// SPDX-License-Identifier: Apache-2.0
//
// Named Monte Carlo / structural suites behind `seco verify`. Each suite runs
// on its own substream of the seed, so results do not depend on which other
// suites ran.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seco/report.hpp"

namespace seco {

struct VerifyOptions {
    std::uint64_t seed = 0;
    std::optional<std::size_t> trials;   // overrides each suite's default count
    std::optional<double> tolerance;     // overrides each suite's primary tolerance
    std::optional<HiddenStates> perm_input;
    std::size_t tau = 4;                 // compression rate used by perm and nystrom
};

struct SuiteResult {
    std::string name;
    bool passed = false;
    Json metrics;
};

/// perm, attenuation, correlated, sinusoidal, rope, nystrom.
std::span<const std::string_view> suite_names();

/// Runs one suite, or every suite for "all". Unknown names throw InvalidArgument.
std::vector<SuiteResult> run_verify(std::string_view suite, const VerifyOptions& opts);

/// Gaussian context/query with the given shape.
HiddenStates random_hidden_states(std::size_t n_context, std::size_t n_query, std::size_t dim, Rng& rng);

} // namespace seco
