// SPDX-License-Identifier: Apache-2.0
#include "seco/compress.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace seco {

std::string_view to_string(Variant v) noexcept {
    switch (v) {
    case Variant::Default: return "default";
    case Variant::NoQuery: return "no-query";
    case Variant::NoConsistencyMerging: return "no-consistency-merging";
    case Variant::UniformSampleCenters: return "uniform-sample-centers";
    }
    return "default";
}

std::optional<Variant> parse_variant(std::string_view name) noexcept {
    for (Variant v : {Variant::Default, Variant::NoQuery, Variant::NoConsistencyMerging,
                      Variant::UniformSampleCenters}) {
        if (name == to_string(v)) {
            return v;
        }
    }
    return std::nullopt;
}

std::size_t num_compressed_tokens(std::size_t n_context, std::size_t tau) {
    if (n_context == 0 || tau == 0) {
        throw Error(ErrorKind::InvalidArgument, "num_compressed_tokens needs n_context >= 1 and tau >= 1");
    }
    const std::size_t ceil_div = (n_context + tau - 1) / tau;
    return std::min(std::max<std::size_t>(2, ceil_div), n_context);
}

std::vector<double> relevance_scores(const Matrix& context, std::span<const double> q_bar) {
    if (context.cols() != q_bar.size()) {
        throw Error(ErrorKind::Dimension, "context width " + std::to_string(context.cols()) +
                                              " != query width " + std::to_string(q_bar.size()));
    }
    std::vector<double> r(context.rows());
    for (std::size_t i = 0; i < context.rows(); ++i) {
        r[i] = cosine_similarity(context.row(i), q_bar);
    }
    return r;
}

std::vector<std::size_t> select_centers(std::span<const double> r, std::size_t k) {
    if (k == 0 || k > r.size()) {
        throw Error(ErrorKind::InvalidArgument, "select_centers: k=" + std::to_string(k) +
                                                    " outside [1, " + std::to_string(r.size()) + "]");
    }
    std::vector<std::size_t> order(r.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Strict weak order: larger score first, then lower index.
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          return r[a] != r[b] ? r[a] > r[b] : a < b;
                      });
    order.resize(k);
    std::sort(order.begin(), order.end());
    return order;
}

MatrixD assignment_scores(const Matrix& non_centers, const Matrix& centers,
                          std::span<const double> r_non) {
    if (non_centers.rows() > 0 && non_centers.cols() != centers.cols()) {
        throw Error(ErrorKind::Dimension, "non-center width " + std::to_string(non_centers.cols()) +
                                              " != center width " + std::to_string(centers.cols()));
    }
    if (r_non.size() != non_centers.rows()) {
        throw Error(ErrorKind::Dimension, "relevance length " + std::to_string(r_non.size()) +
                                              " != non-center count " +
                                              std::to_string(non_centers.rows()));
    }
    MatrixD v(non_centers.rows(), centers.rows());
    for (std::size_t i = 0; i < non_centers.rows(); ++i) {
        for (std::size_t k = 0; k < centers.rows(); ++k) {
            v(i, k) = r_non[i] * cosine_similarity(non_centers.row(i), centers.row(k));
        }
    }
    return v;
}

std::vector<std::size_t> assign_tokens(const MatrixD& v) {
    if (v.rows() > 0 && v.cols() == 0) {
        throw Error(ErrorKind::InvalidArgument, "assign_tokens needs at least one center");
    }
    std::vector<std::size_t> best(v.rows(), 0);
    for (std::size_t i = 0; i < v.rows(); ++i) {
        for (std::size_t k = 1; k < v.cols(); ++k) {
            if (v(i, k) > v(i, best[i])) {
                best[i] = k;
            }
        }
    }
    return best;
}

std::vector<double> consistency_weights(std::span<const double> relevance,
                                        std::span<const std::size_t> centers,
                                        std::span<const std::size_t> non_centers,
                                        const MatrixD& v,
                                        std::span<const std::size_t> assignment) {
    if (non_centers.size() != v.rows() || assignment.size() != v.rows()) {
        throw Error(ErrorKind::Dimension, "consistency_weights: score table and assignment disagree");
    }
    std::vector<double> w(relevance.size(), 0.0);
    for (std::size_t c : centers) {
        w[c] = relevance[c];
    }
    for (std::size_t j = 0; j < non_centers.size(); ++j) {
        w[non_centers[j]] = v(j, assignment[j]);
    }
    return w;
}

MergeOutput merge_groups(const Matrix& context, std::span<const std::size_t> group_of,
                         std::size_t num_groups, std::span<const double> w) {
    if (group_of.size() != context.rows() || w.size() != context.rows()) {
        throw Error(ErrorKind::Dimension, "merge_groups: group map or weights do not cover the context");
    }
    std::vector<std::vector<std::size_t>> members(num_groups);
    for (std::size_t i = 0; i < group_of.size(); ++i) {
        if (group_of[i] >= num_groups) {
            throw Error(ErrorKind::InvalidArgument,
                        "token " + std::to_string(i) + " has group id out of range");
        }
        members[group_of[i]].push_back(i);
    }

    const std::size_t d = context.cols();
    MergeOutput out{Matrix(num_groups, d), std::vector<double>(context.rows(), 0.0)};
    std::vector<double> acc(d);
    std::vector<double> group_w;
    for (std::size_t k = 0; k < num_groups; ++k) {
        const auto& idx = members[k];
        if (idx.empty()) {
            throw Error(ErrorKind::Internal, "group " + std::to_string(k) + " is empty");
        }
        group_w.clear();
        for (std::size_t i : idx) {
            group_w.push_back(w[i]);
        }
        const std::vector<double> alpha = softmax(group_w);
        std::fill(acc.begin(), acc.end(), 0.0);
        for (std::size_t m = 0; m < idx.size(); ++m) {
            out.alpha[idx[m]] = alpha[m];
            auto row = context.row(idx[m]);
            for (std::size_t j = 0; j < d; ++j) {
                acc[j] += alpha[m] * static_cast<double>(row[j]);
            }
        }
        auto dst = out.merged.row(k);
        for (std::size_t j = 0; j < d; ++j) {
            dst[j] = static_cast<float>(acc[j]);
        }
    }
    return out;
}

namespace {

std::vector<std::size_t> complement(std::size_t n, std::span<const std::size_t> sorted_centers) {
    std::vector<std::size_t> rest;
    rest.reserve(n - sorted_centers.size());
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (c < sorted_centers.size() && sorted_centers[c] == i) {
            ++c;
        } else {
            rest.push_back(i);
        }
    }
    return rest;
}

// Assignment and merging shared by Default, NoQuery and UniformSampleCenters.
// With use_query == false the relevance factor in v(i,k) is replaced by 1, so
// the score reduces to the plain center similarity s(i,k).
CompressionResult assign_and_merge(const Matrix& context, std::vector<double> relevance,
                                   std::vector<std::size_t> centers, bool use_query) {
    const std::vector<std::size_t> non_centers = complement(context.rows(), centers);

    std::vector<double> r_non(non_centers.size(), 1.0);
    if (use_query) {
        for (std::size_t j = 0; j < non_centers.size(); ++j) {
            r_non[j] = relevance[non_centers[j]];
        }
    }
    const MatrixD v = assignment_scores(context.gather(non_centers), context.gather(centers), r_non);
    const std::vector<std::size_t> assignment = assign_tokens(v);

    std::vector<std::size_t> group_of(context.rows(), 0);
    for (std::size_t k = 0; k < centers.size(); ++k) {
        group_of[centers[k]] = k;
    }
    for (std::size_t j = 0; j < non_centers.size(); ++j) {
        group_of[non_centers[j]] = assignment[j];
    }

    std::vector<double> w = consistency_weights(relevance, centers, non_centers, v, assignment);
    MergeOutput merged = merge_groups(context, group_of, centers.size(), w);

    return CompressionResult{std::move(merged.merged), std::move(centers), std::move(group_of),
                             std::move(merged.alpha), std::move(w), std::move(relevance)};
}

struct Scored {
    std::vector<double> relevance;
    std::size_t k;
};

Scored score(const HiddenStates& h, const CompressionConfig& cfg) {
    const std::vector<double> q_bar = mean_pool(h.query());
    return {relevance_scores(h.context(), q_bar), num_compressed_tokens(h.n_context(), cfg.tau)};
}

} // namespace

CompressionResult compress(const HiddenStates& h, const CompressionConfig& cfg) {
    if (cfg.variant != Variant::Default) {
        throw Error(ErrorKind::InvalidArgument, "compress expects the default variant, got " +
                                                    std::string(to_string(cfg.variant)));
    }
    Scored s = score(h, cfg);
    std::vector<std::size_t> centers = select_centers(s.relevance, s.k);
    return assign_and_merge(h.context(), std::move(s.relevance), std::move(centers), true);
}

std::vector<std::size_t> uniform_centers(std::size_t n_context, std::size_t k) {
    if (k == 0 || k > n_context) {
        throw Error(ErrorKind::InvalidArgument, "uniform_centers: k=" + std::to_string(k) +
                                                    " outside [1, " + std::to_string(n_context) + "]");
    }
    if (k == 1) {
        return {0};
    }
    std::vector<std::size_t> centers;
    centers.reserve(k);
    std::vector<bool> taken(n_context, false);
    const std::size_t span = n_context - 1;
    const std::size_t steps = k - 1;
    for (std::size_t j = 0; j < k; ++j) {
        // Round-half-up of j * span / steps in exact integer arithmetic.
        std::size_t pos = (2 * j * span + steps) / (2 * steps);
        while (pos < n_context && taken[pos]) {
            ++pos;
        }
        if (pos == n_context) {
            // Unreachable for k <= n_context (spacing >= 1), kept for totality.
            pos = static_cast<std::size_t>(
                std::find(taken.begin(), taken.end(), false) - taken.begin());
        }
        taken[pos] = true;
        centers.push_back(pos);
    }
    std::sort(centers.begin(), centers.end());
    return centers;
}

CompressionResult compress_ablation(const HiddenStates& h, const CompressionConfig& cfg) {
    Scored s = score(h, cfg);
    switch (cfg.variant) {
    case Variant::Default:
        break;
    case Variant::NoQuery: {
        std::vector<std::size_t> centers = select_centers(s.relevance, s.k);
        return assign_and_merge(h.context(), std::move(s.relevance), std::move(centers), false);
    }
    case Variant::UniformSampleCenters: {
        std::vector<std::size_t> centers = uniform_centers(h.n_context(), s.k);
        return assign_and_merge(h.context(), std::move(s.relevance), std::move(centers), true);
    }
    case Variant::NoConsistencyMerging: {
        std::vector<std::size_t> centers = select_centers(s.relevance, s.k);
        const std::size_t n = h.n_context();
        const double undefined = std::numeric_limits<double>::quiet_NaN();
        std::vector<std::size_t> group_of(n, kDroppedGroup);
        std::vector<double> alpha(n, undefined);
        std::vector<double> w(n, undefined);
        for (std::size_t k = 0; k < centers.size(); ++k) {
            group_of[centers[k]] = k;
            alpha[centers[k]] = 1.0;
            w[centers[k]] = s.relevance[centers[k]];
        }
        Matrix rows = h.context().gather(centers);
        return CompressionResult{std::move(rows), std::move(centers), std::move(group_of),
                                 std::move(alpha), std::move(w), std::move(s.relevance)};
    }
    }
    throw Error(ErrorKind::InvalidArgument, "compress_ablation expects a non-default variant");
}

CompressionResult run_compression(const HiddenStates& h, const CompressionConfig& cfg) {
    return cfg.variant == Variant::Default ? compress(h, cfg) : compress_ablation(h, cfg);
}

} // namespace seco
