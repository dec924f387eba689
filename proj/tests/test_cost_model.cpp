// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <limits>

#include "seco/compress.hpp"
#include "seco/cost_model.hpp"
#include "seco/error.hpp"

using namespace seco;

namespace {

ModelShape tiny() {
    ModelShape s;
    s.n_layers = 1;
    s.d_model = 4;
    s.d_ff = 8;
    s.n_heads = 1;
    return s;
}

} // namespace

TEST_CASE("single-token forward pass by hand") {
    // 8*16 + 4*4*1 + 4*4*8
    CHECK(transformer_forward_flops(tiny(), 0, 1) == 272);
    CHECK(attention_flops(tiny(), 0, 1) == 16);
    CHECK_THROWS_AS(transformer_forward_flops(tiny(), 0, 0), Error);
}

TEST_CASE("forward pass grows superlinearly in sequence length") {
    const ModelShape s;
    for (std::uint64_t n : {1u, 7u, 64u, 1000u}) {
        CHECK(transformer_forward_flops(s, 0, 2 * n) > 2 * transformer_forward_flops(s, 0, n));
    }
}

TEST_CASE("prefill equals the sum of single-token steps") {
    const ModelShape s;
    Flops steps = 0;
    for (std::uint64_t t = 0; t < 50; ++t) {
        steps += transformer_forward_flops(s, t, 1);
    }
    CHECK(transformer_forward_flops(s, 0, 50) == steps);
    CHECK(transformer_forward_flops(s, 10, 40) + transformer_forward_flops(s, 0, 10) == steps);
}

TEST_CASE("layers and vocab projection scale as expected") {
    ModelShape one = tiny();
    ModelShape three = tiny();
    three.n_layers = 3;
    CHECK(transformer_forward_flops(three, 5, 9) == 3 * transformer_forward_flops(one, 5, 9));

    ModelShape with_vocab = tiny();
    with_vocab.vocab = 100;
    with_vocab.include_vocab = true;
    CHECK(transformer_forward_flops(with_vocab, 0, 1) == 272 + 2 * 4 * 100);
}

TEST_CASE("compression stage formulas") {
    const ModelShape s = tiny();
    const FlopsBreakdown b = compression_flops(s, 12, 10, 3, 4);
    CHECK(b.encoder_prefill == transformer_forward_flops(s, 0, 12));
    CHECK(b.selection == 10 * 16 + 8);
    CHECK(b.assignment == 7 * 3 * 16 + 7 * 3);
    CHECK(b.merging == 10 * 8 + 30);
    CHECK(b.generation == 0);
    CHECK(b.overhead() == b.selection + b.assignment + b.merging);
    CHECK(b.total == b.encoder_prefill + b.overhead());

    SUBCASE("no assignment work when every token is a center") {
        CHECK(compression_flops(s, 10, 10, 10, 4).assignment == 0);
    }
    SUBCASE("assignment is linear in K for fixed non-center count") {
        // (L_c - K) K terms: hold L_c - K fixed by moving both.
        const Flops a1 = compression_flops(s, 200, 110, 10, 4).assignment;
        const Flops a2 = compression_flops(s, 200, 120, 20, 4).assignment;
        const Flops a3 = compression_flops(s, 200, 130, 30, 4).assignment;
        CHECK(a2 - a1 == a3 - a2);
    }
    SUBCASE("invalid lengths") {
        CHECK_THROWS_AS(compression_flops(s, 5, 10, 3, 4), Error);
        CHECK_THROWS_AS(compression_flops(s, 12, 10, 11, 4), Error);
        CHECK_THROWS_AS(compression_flops(s, 12, 10, 0, 4), Error);
    }
}

TEST_CASE("generation stage") {
    const ModelShape s;
    CHECK(generation_flops(s, 8, 4, 1) == transformer_forward_flops(s, 12, 1));
    CHECK(generation_flops(s, 8, 4, 5) == transformer_forward_flops(s, 12, 5));

    SUBCASE("monotone in each length") {
        const Flops base = generation_flops(s, 16, 8, 8);
        CHECK(generation_flops(s, 17, 8, 8) > base);
        CHECK(generation_flops(s, 16, 9, 8) > base);
        CHECK(generation_flops(s, 16, 8, 9) > base);
    }
    SUBCASE("attention share") {
        CHECK(generation_attention_flops(s, 8, 4, 5) == attention_flops(s, 12, 5));
        CHECK(generation_attention_flops(s, 8, 4, 5) < generation_flops(s, 8, 4, 5));
    }
    CHECK_THROWS_AS(generation_flops(s, 0, 4, 1), Error);
    CHECK_THROWS_AS(generation_flops(s, 4, 4, 0), Error);
}

TEST_CASE("end to end at the reference shape") {
    const ModelShape s; // 12 layers, d = 512
    const std::uint64_t L_c = 1024, L_q = 32, L_a = 16;
    const std::uint64_t K = num_compressed_tokens(L_c, 16);
    const FlopsBreakdown b = end_to_end_flops(s, L_c, L_q, L_a, K);
    CHECK(b.encoder_prefill == transformer_forward_flops(s, 0, L_c + L_q));
    CHECK(b.generation == generation_flops(s, K, L_q, L_a));
    CHECK(b.total == b.encoder_prefill + b.overhead() + b.generation);
    CHECK(static_cast<double>(b.overhead()) / static_cast<double>(b.encoder_prefill) < 0.01);

    SUBCASE("tau = 1 leaves generation unchanged") {
        const FlopsBreakdown full = end_to_end_flops(s, L_c, L_q, L_a, L_c);
        CHECK(full.generation == generation_flops(s, L_c, L_q, L_a));
        CHECK(full.assignment == 0);
    }
    SUBCASE("compression lowers generation cost") {
        CHECK(b.generation < generation_flops(s, L_c, L_q, L_a));
    }
}

TEST_CASE("long-context attention ratio approaches the length ratio") {
    const ModelShape s;
    const std::uint64_t L_c = 8192, L_q = 32, K = num_compressed_tokens(L_c, 16);
    const double expected = static_cast<double>(K + L_q) / static_cast<double>(L_c + L_q);
    for (std::uint64_t L_a : {1u, 16u, 64u}) {
        const double ratio = static_cast<double>(generation_attention_flops(s, K, L_q, L_a)) /
                             static_cast<double>(generation_attention_flops(s, L_c, L_q, L_a));
        CHECK(std::abs(ratio / expected - 1.0) <= 0.10);
    }
}

TEST_CASE("overflow and shape validation") {
    ModelShape huge;
    huge.d_model = std::uint64_t{1} << 40;
    huge.d_ff = std::uint64_t{1} << 40;
    huge.n_heads = 1;
    try {
        transformer_forward_flops(huge, 0, 1024);
        FAIL("expected overflow");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Overflow);
    }

    ModelShape long_seq;
    CHECK_THROWS_AS(transformer_forward_flops(long_seq, std::numeric_limits<std::uint64_t>::max() - 1, 2),
                    Error);

    ModelShape bad_heads;
    bad_heads.n_heads = 3; // 512 % 3 != 0
    CHECK_THROWS_AS(bad_heads.validate(), Error);
    ModelShape zero_layers;
    zero_layers.n_layers = 0;
    CHECK_THROWS_AS(transformer_forward_flops(zero_layers, 0, 1), Error);
}
