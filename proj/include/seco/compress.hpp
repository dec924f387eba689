// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "seco/tensor.hpp"

namespace seco {

enum class Variant {
    Default,
    NoQuery,              // assignment and member weights ignore query relevance
    NoConsistencyMerging, // plain top-K selection, non-centers dropped
    UniformSampleCenters, // equidistant centers, usual assignment and merging
};

std::string_view to_string(Variant v) noexcept;
std::optional<Variant> parse_variant(std::string_view name) noexcept;

/// Group id given to tokens that NoConsistencyMerging discards.
inline constexpr std::size_t kDroppedGroup = std::numeric_limits<std::size_t>::max();

struct CompressionConfig {
    std::size_t tau = 16;
    Variant variant = Variant::Default;
    // Ties in top-k and argmax always go to the lowest index; there is no
    // alternative policy, so the field is implicit.
};

struct CompressionResult {
    Matrix compressed;                 // K x d, ordered by ascending center index
    std::vector<std::size_t> centers;  // ascending original context indices
    std::vector<std::size_t> group_of; // per context token; kDroppedGroup if discarded
    std::vector<double> weights_alpha; // normalized within each group; NaN if dropped
    std::vector<double> weights_w;     // raw consistency weight; NaN if dropped
    std::vector<double> relevance;     // cosine to the pooled query

    std::size_t k() const noexcept { return centers.size(); }
};

/// K = min(max(2, ceil(n_context / tau)), n_context).
std::size_t num_compressed_tokens(std::size_t n_context, std::size_t tau);

std::vector<double> relevance_scores(const Matrix& context, std::span<const double> q_bar);

/// Indices of the k largest scores (lowest index wins ties), returned in
/// ascending index order.
std::vector<std::size_t> select_centers(std::span<const double> r, std::size_t k);

/// v[i][k] = r_non[i] * cos(non_center i, center k).
MatrixD assignment_scores(const Matrix& non_centers, const Matrix& centers,
                          std::span<const double> r_non);

/// Row-wise argmax, ties to the lowest column.
std::vector<std::size_t> assign_tokens(const MatrixD& v);

/// Raw weights over all context tokens: r_i for centers, v(i, k*) for members.
/// `non_centers[j]` is the context index of row j of `v`, and `assignment[j]`
/// its chosen column.
std::vector<double> consistency_weights(std::span<const double> relevance,
                                        std::span<const std::size_t> centers,
                                        std::span<const std::size_t> non_centers,
                                        const MatrixD& v,
                                        std::span<const std::size_t> assignment);

struct MergeOutput {
    Matrix merged;             // K x d
    std::vector<double> alpha; // per context token
};

/// Softmax-normalizes w inside each group and returns the weighted row sums.
MergeOutput merge_groups(const Matrix& context, std::span<const std::size_t> group_of,
                         std::size_t num_groups, std::span<const double> w);

/// Full pipeline: pool, score, select, assign, weight, merge.
CompressionResult compress(const HiddenStates& h, const CompressionConfig& cfg);

/// Centers for UniformSampleCenters: round(j (n-1)/(k-1)), collisions pushed right.
std::vector<std::size_t> uniform_centers(std::size_t n_context, std::size_t k);

CompressionResult compress_ablation(const HiddenStates& h, const CompressionConfig& cfg);

/// Dispatches on cfg.variant.
CompressionResult run_compression(const HiddenStates& h, const CompressionConfig& cfg);

} // namespace seco
