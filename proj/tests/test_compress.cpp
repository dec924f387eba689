// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "seco/compress.hpp"
#include "seco/rng.hpp"
#include "seco/verify.hpp"

using namespace seco;

namespace {

double max_abs_diff(const Matrix& a, const Matrix& b) {
    REQUIRE(a.rows() == b.rows());
    REQUIRE(a.cols() == b.cols());
    double dev = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        dev = std::max(dev, std::abs(static_cast<double>(a.data()[i]) - b.data()[i]));
    }
    return dev;
}

// Checks the CompressionResult invariants for merged (non-dropping) variants.
void check_result_invariants(const CompressionResult& r, const Matrix& context) {
    const std::size_t k = r.k();
    REQUIRE(r.compressed.rows() == k);
    REQUIRE(r.group_of.size() == context.rows());
    CHECK(std::is_sorted(r.centers.begin(), r.centers.end()));
    for (std::size_t g = 0; g < k; ++g) {
        CHECK(r.group_of[r.centers[g]] == g);
    }
    std::vector<double> alpha_sum(k, 0.0);
    std::vector<std::vector<double>> recon(k, std::vector<double>(context.cols(), 0.0));
    for (std::size_t i = 0; i < context.rows(); ++i) {
        const std::size_t g = r.group_of[i];
        REQUIRE(g < k);
        CHECK(r.weights_alpha[i] > 0.0);
        alpha_sum[g] += r.weights_alpha[i];
        for (std::size_t j = 0; j < context.cols(); ++j) {
            recon[g][j] += r.weights_alpha[i] * context(i, j);
        }
    }
    for (std::size_t g = 0; g < k; ++g) {
        CHECK(std::abs(alpha_sum[g] - 1.0) <= 1e-6);
        for (std::size_t j = 0; j < context.cols(); ++j) {
            CHECK(std::abs(recon[g][j] - r.compressed(g, j)) <= 1e-5);
        }
    }
}

} // namespace

TEST_CASE("num_compressed_tokens") {
    CHECK(num_compressed_tokens(100, 16) == 7);
    CHECK(num_compressed_tokens(16, 32) == 2);
    CHECK(num_compressed_tokens(1, 16) == 1);
    CHECK(num_compressed_tokens(2, 1) == 2);
    CHECK(num_compressed_tokens(33, 16) == 3);
    CHECK_THROWS_AS(num_compressed_tokens(0, 4), Error);
    CHECK_THROWS_AS(num_compressed_tokens(4, 0), Error);
}

TEST_CASE("relevance_scores") {
    const std::vector<double> q{1, 0};
    CHECK(relevance_scores(Matrix::from_rows({{1, 0}}), q)[0] == doctest::Approx(1.0));

    const auto r = relevance_scores(Matrix::from_rows({{0, 1}, {-1, 0}}), q);
    CHECK(r[0] == 0.0);
    CHECK(r[1] == doctest::Approx(-1.0));

    const auto s = relevance_scores(Matrix::from_rows({{1, 1}, {2, 2}}), q);
    CHECK(std::abs(s[0] - 0.7071) <= 1e-4);
    CHECK(std::abs(s[1] - 0.7071) <= 1e-4);

    CHECK_THROWS_AS(relevance_scores(Matrix::from_rows({{1, 0, 0}}), q), Error);
}

TEST_CASE("select_centers") {
    CHECK(select_centers(std::vector<double>{0.9, 0.1, 0.8, 0.5}, 2) == std::vector<std::size_t>{0, 2});
    CHECK(select_centers(std::vector<double>{0.5, 0.5, 0.5}, 2) == std::vector<std::size_t>{0, 1});
    CHECK(select_centers(std::vector<double>{-0.2, -0.9}, 2) == std::vector<std::size_t>{0, 1});
    // Output is index-ordered, not score-ordered.
    CHECK(select_centers(std::vector<double>{0.1, 0.2, 0.9}, 2) == std::vector<std::size_t>{1, 2});
    CHECK_THROWS_AS(select_centers(std::vector<double>{0.1}, 2), Error);
    CHECK_THROWS_AS(select_centers(std::vector<double>{0.1}, 0), Error);
}

TEST_CASE("assignment_scores") {
    // Rows chosen so cos(non, c0) = 0.5 and cos(non, c1) = 0.9 exactly enough.
    const double s1 = 0.9;
    const Matrix centers = Matrix::from_rows({{0.5f, static_cast<float>(std::sqrt(0.75))},
                                              {static_cast<float>(s1), static_cast<float>(std::sqrt(1 - s1 * s1))}});
    const Matrix non = Matrix::from_rows({{1, 0}});

    const MatrixD v = assignment_scores(non, centers, std::vector<double>{0.8});
    CHECK(std::abs(v(0, 0) - 0.40) <= 1e-6);
    CHECK(std::abs(v(0, 1) - 0.72) <= 1e-6);

    const MatrixD zero = assignment_scores(non, centers, std::vector<double>{0.0});
    CHECK(zero(0, 0) == 0.0);
    CHECK(zero(0, 1) == 0.0);

    const MatrixD neg = assignment_scores(non, centers, std::vector<double>{-0.5});
    CHECK(std::abs(neg(0, 0) + 0.25) <= 1e-6);
    CHECK(std::abs(neg(0, 1) + 0.45) <= 1e-6);

    CHECK_THROWS_AS(assignment_scores(non, centers, std::vector<double>{0.1, 0.2}), Error);
    CHECK_THROWS_AS(assignment_scores(Matrix::from_rows({{1, 0, 0}}), centers, std::vector<double>{1}), Error);
}

TEST_CASE("assign_tokens") {
    CHECK(assign_tokens(MatrixD::from_rows({{0.40, 0.72}})) == std::vector<std::size_t>{1});
    CHECK(assign_tokens(MatrixD::from_rows({{0.3, 0.3}})) == std::vector<std::size_t>{0});
    CHECK(assign_tokens(MatrixD::from_rows({{-0.25, -0.45}})) == std::vector<std::size_t>{0});
    CHECK(assign_tokens(MatrixD(0, 3)).empty());
}

TEST_CASE("consistency_weights") {
    const std::vector<double> r{0.9, 0.8, 0.0};
    const std::vector<std::size_t> centers{0};
    const std::vector<std::size_t> non{1, 2};
    const MatrixD v = MatrixD::from_rows({{0.8 * 0.9}, {0.0}});
    const std::vector<std::size_t> assignment{0, 0};
    const auto w = consistency_weights(r, centers, non, v, assignment);
    CHECK(w[0] == 0.9);
    CHECK(std::abs(w[1] - 0.72) <= 1e-12);
    CHECK(w[2] == 0.0);
}

TEST_CASE("merge_groups") {
    SUBCASE("singleton group reproduces the center") {
        const Matrix ctx = Matrix::from_rows({{3, -1}});
        const auto out = merge_groups(ctx, std::vector<std::size_t>{0}, 1, std::vector<double>{0.4});
        CHECK(max_abs_diff(out.merged, ctx) <= 1e-7);
        CHECK(out.alpha[0] == 1.0);
    }
    SUBCASE("equal weights give the midpoint") {
        const Matrix ctx = Matrix::from_rows({{1, 2}, {3, 6}});
        const auto out = merge_groups(ctx, std::vector<std::size_t>{0, 0}, 1, std::vector<double>{0.3, 0.3});
        CHECK(max_abs_diff(out.merged, Matrix::from_rows({{2, 4}})) <= 1e-6);
    }
    SUBCASE("weights (0, ln 3)") {
        const Matrix ctx = Matrix::from_rows({{4, 0}, {0, 4}});
        const auto out =
            merge_groups(ctx, std::vector<std::size_t>{0, 0}, 1, std::vector<double>{0.0, std::log(3.0)});
        CHECK(max_abs_diff(out.merged, Matrix::from_rows({{1, 3}})) <= 1e-5);
    }
    SUBCASE("empty group is an internal error") {
        const Matrix ctx = Matrix::from_rows({{1, 0}});
        try {
            merge_groups(ctx, std::vector<std::size_t>{0}, 2, std::vector<double>{0.0});
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Internal);
        }
    }
}

TEST_CASE("compress: four-token worked example") {
    // Frozen from a float64 step-by-step evaluation of pooling, relevance,
    // top-k, joint scores, argmax, weights and group softmax.
    const HiddenStates h(Matrix::from_rows({{1, 0}, {0.9f, 0.1f}, {0, 1}, {0.1f, 0.9f}}),
                         Matrix::from_rows({{1, 0}}));
    const CompressionResult r = compress(h, {2, Variant::Default});

    CHECK(r.k() == 2);
    CHECK(r.centers == std::vector<std::size_t>{0, 1});
    CHECK(r.group_of == std::vector<std::size_t>{0, 1, 0, 1});

    const std::vector<double> relevance{1.0, 0.9938837346725213, 0.0, 0.11043152607472459};
    const std::vector<double> w{1.0, 0.9938837346725213, 0.0, 0.024241066699300224};
    const std::vector<double> alpha{0.7310585786298083, 0.7250482682081401, 0.2689414213701917,
                                    0.27495173179186005};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(std::abs(r.relevance[i] - relevance[i]) <= 1e-6);
        CHECK(std::abs(r.weights_w[i] - w[i]) <= 1e-6);
        CHECK(std::abs(r.weights_alpha[i] - alpha[i]) <= 1e-6);
    }
    const Matrix expected = Matrix::from_rows({{0.73105858f, 0.26894142f}, {0.68003861f, 0.31996139f}});
    CHECK(max_abs_diff(r.compressed, expected) <= 1e-5);
    check_result_invariants(r, h.context());
}

TEST_CASE("compress: tau = 1 is the identity") {
    const Matrix ctx = Matrix::from_rows({{1, 2}, {-3, 0.5f}, {0, 7}});
    const HiddenStates h(ctx, Matrix::from_rows({{1, 1}}));
    const CompressionResult r = compress(h, {1, Variant::Default});
    CHECK(r.centers == std::vector<std::size_t>{0, 1, 2});
    CHECK(r.compressed == ctx);
}

TEST_CASE("compress: identical context rows collapse to that row") {
    Rng rng(21);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 1 + rng.below(40), d = 1 + rng.below(8);
        std::vector<float> row(d), data;
        for (float& x : row) {
            x = static_cast<float>(rng.normal());
        }
        for (std::size_t i = 0; i < n; ++i) {
            data.insert(data.end(), row.begin(), row.end());
        }
        Rng qrng = rng.fork(static_cast<std::uint64_t>(t));
        const HiddenStates h(Matrix(n, d, data), random_hidden_states(1, 2, d, qrng).query());
        const CompressionResult r = compress(h, {1 + rng.below(8), Variant::Default});
        for (std::size_t g = 0; g < r.k(); ++g) {
            for (std::size_t j = 0; j < d; ++j) {
                CHECK(std::abs(r.compressed(g, j) - row[j]) <= 1e-5);
            }
        }
    }
}

TEST_CASE("compress: single context token") {
    const HiddenStates h(Matrix::from_rows({{2, 5}}), Matrix::from_rows({{1, 0}}));
    const CompressionResult r = compress(h, {16, Variant::Default});
    CHECK(r.k() == 1);
    CHECK(r.compressed == h.context());
}

TEST_CASE("compress rejects ablation variants and vice versa") {
    const HiddenStates h(Matrix::from_rows({{1, 0}, {0, 1}}), Matrix::from_rows({{1, 0}}));
    CHECK_THROWS_AS(compress(h, {2, Variant::NoQuery}), Error);
    CHECK_THROWS_AS(compress_ablation(h, {2, Variant::Default}), Error);
    CHECK_NOTHROW(run_compression(h, {2, Variant::NoQuery}));
}

TEST_CASE("row-count law over an exhaustive sweep") {
    Rng rng(1);
    for (std::size_t n = 1; n <= 256; ++n) {
        const HiddenStates h = random_hidden_states(n, 2, 4, rng);
        for (std::size_t tau : {1, 2, 4, 8, 16, 32}) {
            const std::size_t expected = std::min(std::max<std::size_t>(2, (n + tau - 1) / tau), n);
            CHECK(compress(h, {tau, Variant::Default}).compressed.rows() == expected);
        }
    }
}

TEST_CASE("partition and reconstruction laws on random inputs") {
    Rng rng(99);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 1 + rng.below(64), d = 1 + rng.below(32);
        const HiddenStates h = random_hidden_states(n, 1 + rng.below(4), d, rng);
        for (Variant v : {Variant::Default, Variant::NoQuery, Variant::UniformSampleCenters}) {
            const CompressionResult r = run_compression(h, {std::size_t{1} << rng.below(6), v});
            check_result_invariants(r, h.context());
        }
    }
}

TEST_CASE("positive rescaling of one row keeps every discrete choice") {
    Rng rng(5);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 2 + rng.below(40), d = 2 + rng.below(12);
        const HiddenStates h = random_hidden_states(n, 2, d, rng);
        const CompressionConfig cfg{2 + rng.below(6), Variant::Default};

        std::vector<float> data(h.context().data().begin(), h.context().data().end());
        const std::size_t row = rng.below(n);
        const double c = rng.uniform(0.1, 10.0);
        for (std::size_t j = 0; j < d; ++j) {
            data[row * d + j] = static_cast<float>(data[row * d + j] * c);
        }
        const HiddenStates scaled(Matrix(n, d, data), h.query());

        const CompressionResult a = compress(h, cfg);
        const CompressionResult b = compress(scaled, cfg);
        CHECK(std::abs(a.relevance[row] - b.relevance[row]) <= 1e-6);
        // Float rounding of the scaled row can move a score by ~1e-7; skip
        // instances where that is enough to flip a near-tie.
        std::vector<double> sorted = a.relevance;
        std::sort(sorted.begin(), sorted.end());
        bool near_tie = false;
        for (std::size_t i = 1; i < sorted.size(); ++i) {
            near_tie = near_tie || sorted[i] - sorted[i - 1] < 1e-5;
        }
        if (near_tie) {
            continue;
        }
        CHECK(a.centers == b.centers);
        CHECK(a.group_of == b.group_of);
    }
}

TEST_CASE("compress is deterministic") {
    Rng rng(8);
    const HiddenStates h = random_hidden_states(50, 3, 16, rng);
    const CompressionResult a = compress(h, {4, Variant::Default});
    const CompressionResult b = compress(h, {4, Variant::Default});
    CHECK(a.compressed == b.compressed);
    CHECK(a.weights_alpha == b.weights_alpha);
    CHECK(a.group_of == b.group_of);
}

TEST_CASE("negative relevance inverts the assignment preference") {
    // Token 2 is anti-correlated with the query, so v = r * s prefers the
    // center it is LESS similar to.
    const HiddenStates h(Matrix::from_rows({{1, 0}, {0.6f, 0.8f}, {-0.8f, -0.6f}}), Matrix::from_rows({{1, 0}}));
    const CompressionResult r = compress(h, {2, Variant::Default});
    REQUIRE(r.centers == std::vector<std::size_t>{0, 1});
    // s(2,0) = -0.8, s(2,1) = -0.96, r_2 = -0.8: v = (0.64, 0.768) -> center 1.
    CHECK(r.group_of[2] == 1);
    CHECK(r.weights_w[2] == doctest::Approx(0.768).epsilon(1e-6));
}

// --------------------------------------------------------------------------
// Ablations

TEST_CASE("NoConsistencyMerging is a pure top-k gather") {
    // Relevance to q = (1, 0) is the first coordinate for these unit rows.
    const HiddenStates h(Matrix::from_rows({{0.9f, std::sqrt(1 - 0.81f)},
                                            {0.1f, std::sqrt(1 - 0.01f)},
                                            {0.8f, std::sqrt(1 - 0.64f)},
                                            {0.5f, std::sqrt(1 - 0.25f)}}),
                         Matrix::from_rows({{1, 0}}));
    const CompressionResult r = compress_ablation(h, {2, Variant::NoConsistencyMerging});
    CHECK(r.centers == std::vector<std::size_t>{0, 2});
    const std::vector<std::size_t> idx{0, 2};
    CHECK(r.compressed == h.context().gather(idx));
    CHECK(r.group_of == std::vector<std::size_t>{0, kDroppedGroup, 1, kDroppedGroup});
    CHECK(std::isnan(r.weights_alpha[1]));
    CHECK(r.weights_alpha[0] == 1.0);
}

TEST_CASE("UniformSampleCenters uses equidistant indices") {
    CHECK(uniform_centers(5, 3) == std::vector<std::size_t>{0, 2, 4});
    CHECK(uniform_centers(1, 1) == std::vector<std::size_t>{0});
    CHECK(uniform_centers(2, 2) == std::vector<std::size_t>{0, 1});
    CHECK(uniform_centers(10, 4) == std::vector<std::size_t>{0, 3, 6, 9});
    CHECK(uniform_centers(7, 7) == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6});
    // 100 tokens, 7 centers: 99/6 = 16.5 -> half rounds up.
    CHECK(uniform_centers(100, 7) == std::vector<std::size_t>{0, 17, 33, 50, 66, 83, 99});
    CHECK_THROWS_AS(uniform_centers(3, 4), Error);

    Rng rng(4);
    const HiddenStates h = random_hidden_states(5, 1, 3, rng);
    const CompressionResult r = compress_ablation(h, {2, Variant::UniformSampleCenters});
    CHECK(r.centers == std::vector<std::size_t>{0, 2, 4});
    check_result_invariants(r, h.context());
}

TEST_CASE("uniform centers are distinct and in range for every k <= n") {
    for (std::size_t n = 1; n <= 80; ++n) {
        for (std::size_t k = 1; k <= n; ++k) {
            const auto c = uniform_centers(n, k);
            REQUIRE(c.size() == k);
            CHECK(std::adjacent_find(c.begin(), c.end(), std::greater_equal<>()) == c.end());
            CHECK(c.back() < n);
        }
    }
}

TEST_CASE("NoQuery assigns by center similarity alone") {
    SUBCASE("equidistant token goes to the lower-index center") {
        const HiddenStates h(Matrix::from_rows({{1, 0}, {0, 1}, {1, 1}}), Matrix::from_rows({{1, 1}}));
        // r = (0.707, 0.707, 1): centers are tokens 0 (tie, lower index) and 2.
        const CompressionResult r = compress_ablation(h, {2, Variant::NoQuery});
        REQUIRE(r.centers == std::vector<std::size_t>{0, 2});

        const HiddenStates sym(Matrix::from_rows({{1, 0}, {0, 1}, {1, 1}, {1, 1}}),
                               Matrix::from_rows({{1, 1}}));
        // Centers: tokens 2 and 3 (identical rows), so tokens 0 and 1 tie exactly.
        const CompressionResult s = compress_ablation(sym, {2, Variant::NoQuery});
        REQUIRE(s.centers == std::vector<std::size_t>{2, 3});
        CHECK(s.group_of[0] == 0);
        CHECK(s.group_of[1] == 0);
    }
    SUBCASE("weights are similarities, centers keep relevance") {
        Rng rng(12);
        const HiddenStates h = random_hidden_states(20, 2, 6, rng);
        const CompressionResult r = compress_ablation(h, {4, Variant::NoQuery});
        for (std::size_t i = 0; i < 20; ++i) {
            const std::size_t g = r.group_of[i];
            if (r.centers[g] == i) {
                CHECK(r.weights_w[i] == r.relevance[i]);
                continue;
            }
            double best = -2.0;
            std::size_t arg = 0;
            for (std::size_t k = 0; k < r.k(); ++k) {
                const double s = cosine_similarity(h.context().row(i), h.context().row(r.centers[k]));
                if (s > best) {
                    best = s;
                    arg = k;
                }
            }
            CHECK(g == arg);
            CHECK(r.weights_w[i] == best);
        }
    }
}

TEST_CASE("variant names round-trip") {
    for (Variant v : {Variant::Default, Variant::NoQuery, Variant::NoConsistencyMerging,
                      Variant::UniformSampleCenters}) {
        CHECK(parse_variant(to_string(v)) == v);
    }
    CHECK_FALSE(parse_variant("bogus").has_value());
}
