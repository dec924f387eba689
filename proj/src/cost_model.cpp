// SPDX-License-Identifier: Apache-2.0
#include "seco/cost_model.hpp"

#include <string>

#include "seco/error.hpp"

namespace seco {

namespace {

Flops add(Flops a, Flops b) {
    Flops out;
    if (__builtin_add_overflow(a, b, &out)) {
        throw Error(ErrorKind::Overflow, "FLOP count exceeds 64 bits");
    }
    return out;
}

Flops mul(Flops a, Flops b) {
    Flops out;
    if (__builtin_mul_overflow(a, b, &out)) {
        throw Error(ErrorKind::Overflow, "FLOP count exceeds 64 bits");
    }
    return out;
}

template <typename... Ts>
Flops mul(Flops a, Flops b, Ts... rest) {
    return mul(mul(a, b), rest...);
}

// sum_{t = first}^{first + count - 1} t
Flops arithmetic_sum(Flops first, Flops count) {
    // count * (2 first + count - 1) / 2, keeping the halving exact.
    Flops a = count;
    Flops b = add(mul(2, first), count) - 1;
    if (a % 2 == 0) {
        a /= 2;
    } else {
        b /= 2;
    }
    return mul(a, b);
}

} // namespace

void ModelShape::validate() const {
    if (n_layers == 0 || d_model == 0 || d_ff == 0 || n_heads == 0) {
        throw Error(ErrorKind::InvalidArgument, "model shape fields must be positive");
    }
    if (d_model % n_heads != 0) {
        throw Error(ErrorKind::InvalidArgument, "d_model " + std::to_string(d_model) +
                                                    " is not divisible by n_heads " +
                                                    std::to_string(n_heads));
    }
    if (include_vocab && vocab == 0) {
        throw Error(ErrorKind::InvalidArgument, "vocab must be positive when the output projection is counted");
    }
}

Flops attention_flops(const ModelShape& shape, std::uint64_t prefix_len, std::uint64_t new_tokens) {
    shape.validate();
    const Flops positions = arithmetic_sum(add(prefix_len, 1), new_tokens);
    return mul(shape.n_layers, 4, shape.d_model, positions);
}

Flops transformer_forward_flops(const ModelShape& shape, std::uint64_t prefix_len,
                                std::uint64_t new_tokens) {
    shape.validate();
    if (new_tokens == 0) {
        throw Error(ErrorKind::InvalidArgument, "new_tokens must be at least 1");
    }
    const Flops d = shape.d_model;
    const Flops dense_per_token = add(mul(8, d, d), mul(4, d, shape.d_ff));
    Flops total = add(mul(shape.n_layers, dense_per_token, new_tokens),
                      attention_flops(shape, prefix_len, new_tokens));
    if (shape.include_vocab) {
        total = add(total, mul(2, d, shape.vocab, new_tokens));
    }
    return total;
}

FlopsBreakdown compression_flops(const ModelShape& shape, std::uint64_t L, std::uint64_t L_c,
                                 std::uint64_t K, std::uint64_t d) {
    if (!(L >= L_c && L_c >= K && K >= 1) || d == 0) {
        throw Error(ErrorKind::InvalidArgument, "compression_flops needs L >= L_c >= K >= 1 and d >= 1");
    }
    FlopsBreakdown b;
    b.encoder_prefill = transformer_forward_flops(shape, 0, L);
    // Dot product and norm per context token, query norm once.
    b.selection = add(mul(L_c, 4, d), mul(2, d));
    // Dot product and norm per (non-center, center) pair, then the r * s product.
    const Flops pairs = mul(L_c - K, K);
    b.assignment = add(mul(pairs, 4, d), pairs);
    // Each token contributes to exactly one weighted sum; ~3 ops per token for exp/sum/divide.
    b.merging = add(mul(L_c, 2, d), mul(3, L_c));
    b.total = add(add(b.encoder_prefill, b.selection), add(b.assignment, b.merging));
    return b;
}

Flops generation_flops(const ModelShape& shape, std::uint64_t K, std::uint64_t L_q,
                       std::uint64_t L_a) {
    if (K == 0 || L_a == 0) {
        throw Error(ErrorKind::InvalidArgument, "generation_flops needs K >= 1 and L_a >= 1");
    }
    // Step i attends over K + L_q + (i - 1) cached tokens plus itself.
    return transformer_forward_flops(shape, add(K, L_q), L_a);
}

Flops generation_attention_flops(const ModelShape& shape, std::uint64_t K, std::uint64_t L_q,
                                 std::uint64_t L_a) {
    if (K == 0 || L_a == 0) {
        throw Error(ErrorKind::InvalidArgument, "generation_attention_flops needs K >= 1 and L_a >= 1");
    }
    return attention_flops(shape, add(K, L_q), L_a);
}

FlopsBreakdown end_to_end_flops(const ModelShape& shape, std::uint64_t L_c, std::uint64_t L_q,
                                std::uint64_t L_a, std::uint64_t K) {
    FlopsBreakdown b = compression_flops(shape, add(L_c, L_q), L_c, K, shape.d_model);
    b.generation = generation_flops(shape, K, L_q, L_a);
    b.total = add(b.total, b.generation);
    return b;
}

} // namespace seco
