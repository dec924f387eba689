// SPDX-License-Identifier: Apache-2.0
//
// JSON views of results and reports. Provenance schema:
//
//   { "tau", "variant", "n_context", "n_query", "dim", "k",
//     "centers":   [int],            ascending context indices
//     "group_of":  [int],            -1 for tokens dropped by an ablation
//     "alpha":     [float | null],   null where undefined
//     "w":         [float | null],
//     "relevance": [float] }
#pragma once

#include <json.hpp>

#include "seco/compress.hpp"
#include "seco/cost_model.hpp"
#include "seco/posbias.hpp"

namespace seco {

using Json = nlohmann::ordered_json;

Json provenance_json(const CompressionResult& r, const HiddenStates& h, const CompressionConfig& cfg);
Json to_json(const ResidualReport& r);
Json to_json(const PermutationReport& r);
Json to_json(const SinusoidalScan& s);
Json to_json(const RopeScan& s);
Json to_json(const FlopsBreakdown& b);

/// Stable text form: two-space indent, trailing newline.
std::string dump(const Json& j);

} // namespace seco
