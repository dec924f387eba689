// SPDX-License-Identifier: Apache-2.0
#include "seco/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace seco {

namespace {

constexpr std::array<std::string_view, 6> kSuites = {"perm",     "attenuation", "correlated",
                                                     "sinusoidal", "rope",      "nystrom"};

constexpr std::size_t kMcTrials = 10000;
constexpr std::size_t kPermTrials = 100;
constexpr std::size_t kNystromInstances = 1000;

std::size_t suite_index(std::string_view name) {
    return static_cast<std::size_t>(std::find(kSuites.begin(), kSuites.end(), name) - kSuites.begin());
}

SuiteResult run_perm(const VerifyOptions& o, Rng& rng) {
    const HiddenStates h = o.perm_input ? *o.perm_input : random_hidden_states(32, 4, 8, rng);
    const CompressionConfig cfg{o.tau, Variant::Default};
    const PermutationReport rep = permutation_invariance_check(h, cfg, o.trials.value_or(kPermTrials),
                                                               rng, o.tolerance.value_or(1e-5));
    return {"perm", rep.passed, to_json(rep)};
}

SuiteResult run_attenuation(const VerifyOptions& o, Rng& rng) {
    const std::size_t trials = o.trials.value_or(kMcTrials);
    const double tol = o.tolerance.value_or(0.05);
    const NoiseSpec noise{1.0, Correlation::None, 0.0};
    constexpr std::size_t dim = 8;

    bool ok = true;
    Json uniform = Json::array();
    std::vector<double> scaled;
    for (std::size_t n : {4, 16, 64}) {
        const ResidualReport r = residual_variance_mc(n, dim, noise, WeightMode::Uniform, trials, rng);
        const double bias_bound = 3.0 * std::sqrt(r.predicted_mse / static_cast<double>(trials));
        const bool pass = r.relative_error <= tol && r.mean_residual_norm <= bias_bound;
        ok = ok && pass;
        scaled.push_back(r.empirical_mse * static_cast<double>(n));
        Json j = to_json(r);
        j["mean_residual_bound"] = bias_bound;
        j["passed"] = pass;
        uniform.push_back(std::move(j));
    }
    double mean_scaled = 0.0;
    for (double s : scaled) {
        mean_scaled += s / static_cast<double>(scaled.size());
    }
    double rate_dev = 0.0;
    for (double s : scaled) {
        rate_dev = std::max(rate_dev, std::abs(s / mean_scaled - 1.0));
    }
    const bool rate_ok = rate_dev <= 0.10;

    const ResidualReport soft = residual_variance_mc(8, dim, noise, WeightMode::RandomSoftmax, trials, rng);
    const bool soft_ok = soft.relative_error <= tol;

    Json m;
    m["tolerance"] = tol;
    m["uniform"] = std::move(uniform);
    m["rate_max_deviation"] = rate_dev;
    m["rate_passed"] = rate_ok;
    m["random_softmax"] = to_json(soft);
    m["random_softmax"]["passed"] = soft_ok;
    return {"attenuation", ok && rate_ok && soft_ok, std::move(m)};
}

SuiteResult run_correlated(const VerifyOptions& o, Rng& rng) {
    const std::size_t trials = o.trials.value_or(kMcTrials);
    const double tol = o.tolerance.value_or(0.05);

    Json sweep = Json::array();
    double lo = INFINITY, hi = 0.0;
    for (std::size_t n : {4, 16, 64}) {
        const ResidualReport r = correlated_residual_mc(n, 0.5, 1.0, 8, trials, rng);
        const double scaled = r.empirical_mse * static_cast<double>(n);
        lo = std::min(lo, scaled);
        hi = std::max(hi, scaled);
        Json j = to_json(r);
        j["mse_times_size"] = scaled;
        sweep.push_back(std::move(j));
    }
    const bool band_ok = hi <= 2.0 * lo;

    // Small-variance single-dimension case: ten times the trials keeps the CLT
    // error of a chi-square(1) estimate well inside the tolerance.
    const ResidualReport pair = correlated_residual_mc(2, 0.5, 1.0, 1, trials * 10, rng);
    const bool pair_ok = std::abs(pair.predicted_mse - 0.75) < 1e-12 && pair.relative_error <= tol;

    Json m;
    m["gamma"] = 0.5;
    m["tolerance"] = tol;
    m["sweep"] = std::move(sweep);
    m["band_ratio"] = hi / lo;
    m["band_passed"] = band_ok;
    m["pair"] = to_json(pair);
    m["pair"]["passed"] = pair_ok;
    return {"correlated", band_ok && pair_ok, std::move(m)};
}

SuiteResult run_sinusoidal(const VerifyOptions& o, Rng& rng) {
    const std::array<std::size_t, 4> sizes = {4, 16, 64, 256};
    const SinusoidalScan scan = sinusoidal_residual_scan(sizes, 1.0, 8, o.trials.value_or(kMcTrials), rng);
    const bool ok = scan.slope >= -1.2 && scan.slope <= -0.8;
    Json m = to_json(scan);
    m["slope_range"] = {-1.2, -0.8};
    return {"sinusoidal", ok, std::move(m)};
}

SuiteResult run_rope(const VerifyOptions& o, Rng& rng) {
    const std::array<double, 4> spreads = {0.0, 0.01, 0.1, 0.5};
    const std::array<std::size_t, 4> sizes = {4, 16, 64, 256};
    const RopeScan scan = rope_residual_scan(spreads, sizes, 8, o.trials.value_or(kMcTrials), rng);

    const bool monotone_spread = scan.at(0.01, 64) < scan.at(0.1, 64) && scan.at(0.1, 64) < scan.at(0.5, 64);
    bool decreasing_size = true;
    for (std::size_t i = 1; i < sizes.size(); ++i) {
        decreasing_size = decreasing_size && scan.at(0.1, sizes[i]) <= scan.at(0.1, sizes[i - 1]);
    }
    bool zero_spread = true;
    for (std::size_t n : sizes) {
        zero_spread = zero_spread && scan.at(0.0, n) == 0.0;
    }
    const bool fit_ok = scan.c_spread >= 0.0 && scan.c_size >= 0.0;

    Json m = to_json(scan);
    m["monotone_in_spread"] = monotone_spread;
    m["decreasing_in_size"] = decreasing_size;
    m["zero_spread_exact"] = zero_spread;
    m["fit_nonnegative"] = fit_ok;
    return {"rope", monotone_spread && decreasing_size && zero_spread && fit_ok, std::move(m)};
}

SuiteResult run_nystrom(const VerifyOptions& o, Rng& rng) {
    const std::size_t instances = o.trials.value_or(kNystromInstances);
    constexpr std::array<std::size_t, 6> taus = {1, 2, 4, 8, 16, 32};
    double max_recon = 0.0, max_row = 0.0;
    std::size_t failures = 0;
    Json first_failure;
    for (std::size_t t = 0; t < instances; ++t) {
        const std::size_t n = 1 + rng.below(64);
        const std::size_t d = 1 + rng.below(32);
        const std::size_t nq = 1 + rng.below(4);
        const HiddenStates h = random_hidden_states(n, nq, d, rng);
        const CompressionConfig cfg{taus[rng.below(taus.size())], Variant::Default};
        try {
            const NystromReport rep = nystrom_assignment_matrix(compress(h, cfg), h.context());
            max_recon = std::max(max_recon, rep.max_reconstruction_error);
            max_row = std::max(max_row, rep.max_row_sum_error);
        } catch (const Error& e) {
            if (failures++ == 0) {
                first_failure = {{"instance", t}, {"message", e.what()}};
            }
        }
    }
    Json m;
    m["instances"] = instances;
    m["failures"] = failures;
    m["max_reconstruction_error"] = max_recon;
    m["max_row_sum_error"] = max_row;
    if (failures > 0) {
        m["first_failure"] = std::move(first_failure);
    }
    return {"nystrom", failures == 0, std::move(m)};
}

SuiteResult run_one(std::string_view name, const VerifyOptions& o) {
    Rng rng = Rng(o.seed).fork(suite_index(name));
    if (name == "perm") return run_perm(o, rng);
    if (name == "attenuation") return run_attenuation(o, rng);
    if (name == "correlated") return run_correlated(o, rng);
    if (name == "sinusoidal") return run_sinusoidal(o, rng);
    if (name == "rope") return run_rope(o, rng);
    return run_nystrom(o, rng);
}

} // namespace

std::span<const std::string_view> suite_names() {
    return kSuites;
}

HiddenStates random_hidden_states(std::size_t n_context, std::size_t n_query, std::size_t dim, Rng& rng) {
    std::vector<float> ctx(n_context * dim), qry(n_query * dim);
    for (float& x : ctx) {
        x = static_cast<float>(rng.normal());
    }
    for (float& x : qry) {
        x = static_cast<float>(rng.normal());
    }
    return HiddenStates(Matrix(n_context, dim, std::move(ctx)), Matrix(n_query, dim, std::move(qry)));
}

std::vector<SuiteResult> run_verify(std::string_view suite, const VerifyOptions& opts) {
    std::vector<SuiteResult> out;
    if (suite == "all") {
        for (std::string_view name : kSuites) {
            out.push_back(run_one(name, opts));
        }
        return out;
    }
    if (suite_index(suite) == kSuites.size()) {
        throw Error(ErrorKind::InvalidArgument, "unknown verify suite '" + std::string(suite) + "'");
    }
    out.push_back(run_one(suite, opts));
    return out;
}

} // namespace seco
