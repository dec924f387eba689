// SPDX-License-Identifier: Apache-2.0
//
// Analytical FLOPs accounting. One multiply-add counts as 2 FLOPs; layer
// norms, residual adds and nonlinearities are ignored. All arithmetic is
// exact 64-bit unsigned and throws ErrorKind::Overflow on wraparound.
#pragma once

#include <cstdint>

namespace seco {

using Flops = std::uint64_t;

struct ModelShape {
    std::uint64_t n_layers = 12;
    std::uint64_t d_model = 512;
    std::uint64_t d_ff = 2048;
    std::uint64_t n_heads = 8;
    std::uint64_t vocab = 32000;
    bool include_vocab = false; // add the output projection to every token

    void validate() const;
};

struct FlopsBreakdown {
    Flops encoder_prefill = 0;
    Flops selection = 0;
    Flops assignment = 0;
    Flops merging = 0;
    Flops generation = 0;
    Flops total = 0;

    Flops overhead() const noexcept { return selection + assignment + merging; }
};

/// Per layer and per new token at absolute position t (1-based, counting the
/// token itself): 8 d^2 (q,k,v,o projections) + 4 d t (scores and values)
/// + 4 d d_ff (feed-forward).
Flops transformer_forward_flops(const ModelShape& shape, std::uint64_t prefix_len,
                                std::uint64_t new_tokens);

/// Only the 4 d t attention term of transformer_forward_flops.
Flops attention_flops(const ModelShape& shape, std::uint64_t prefix_len, std::uint64_t new_tokens);

/// Encoder prefill over L tokens plus selection, assignment and merging over
/// L_c context tokens with K centers of width d. `generation` is left at 0.
FlopsBreakdown compression_flops(const ModelShape& shape, std::uint64_t L, std::uint64_t L_c,
                                 std::uint64_t K, std::uint64_t d);

/// L_a decoder steps over a prefix of K + L_q, KV-cached.
Flops generation_flops(const ModelShape& shape, std::uint64_t K, std::uint64_t L_q,
                       std::uint64_t L_a);

/// Attention share of generation_flops.
Flops generation_attention_flops(const ModelShape& shape, std::uint64_t K, std::uint64_t L_q,
                                 std::uint64_t L_a);

/// compression_flops with generation filled in and total updated.
FlopsBreakdown end_to_end_flops(const ModelShape& shape, std::uint64_t L_c, std::uint64_t L_q,
                                std::uint64_t L_a, std::uint64_t K);

} // namespace seco
