// SPDX-License-Identifier: Apache-2.0
#include "seco/posbias.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace seco {

namespace {

void require_even(std::size_t n, const char* what) {
    if (n == 0 || n % 2 != 0) {
        throw Error(ErrorKind::InvalidArgument,
                    std::string(what) + " needs a positive even dimension, got " + std::to_string(n));
    }
}

double pair_frequency(std::size_t pair, std::size_t dim, double base) {
    return std::pow(base, -2.0 * static_cast<double>(pair) / static_cast<double>(dim));
}

std::vector<double> random_unit(std::size_t dim, Rng& rng) {
    std::vector<double> v(dim);
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (double& x : v) {
            x = rng.normal();
            n2 += x * x;
        }
    } while (n2 == 0.0);
    const double inv = 1.0 / std::sqrt(n2);
    for (double& x : v) {
        x *= inv;
    }
    return v;
}

// Least squares fit of y on (x1, x2) without intercept.
std::pair<double, double> fit_two_terms(std::span<const double> x1, std::span<const double> x2,
                                        std::span<const double> y) {
    double s11 = 0, s12 = 0, s22 = 0, t1 = 0, t2 = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        s11 += x1[i] * x1[i];
        s12 += x1[i] * x2[i];
        s22 += x2[i] * x2[i];
        t1 += x1[i] * y[i];
        t2 += x2[i] * y[i];
    }
    const double det = s11 * s22 - s12 * s12;
    if (det == 0.0) {
        throw Error(ErrorKind::InvalidArgument, "two-term fit is singular; vary both spread and size");
    }
    return {(t1 * s22 - t2 * s12) / det, (t2 * s11 - t1 * s12) / det};
}

} // namespace

std::vector<double> sinusoidal_pe(double position, std::size_t dim, double base) {
    require_even(dim, "sinusoidal_pe");
    std::vector<double> pe(dim);
    for (std::size_t j = 0; j < dim / 2; ++j) {
        const double angle = position * pair_frequency(j, dim, base);
        pe[2 * j] = std::sin(angle);
        pe[2 * j + 1] = std::cos(angle);
    }
    return pe;
}

std::vector<double> rope_rotate(std::span<const double> h, double position, double base) {
    require_even(h.size(), "rope_rotate");
    const std::size_t dim = h.size();
    std::vector<double> out(dim);
    for (std::size_t j = 0; j < dim / 2; ++j) {
        const double angle = position * pair_frequency(j, dim, base);
        const double c = std::cos(angle);
        const double s = std::sin(angle);
        const double x = h[2 * j];
        const double y = h[2 * j + 1];
        out[2 * j] = c * x - s * y;
        out[2 * j + 1] = s * x + c * y;
    }
    return out;
}

// ---------------------------------------------------------------------------

double NoiseSpec::rho(std::size_t lag) const {
    if (lag == 0) {
        return 1.0;
    }
    return correlation == Correlation::Exponential ? std::pow(gamma, static_cast<double>(lag)) : 0.0;
}

void NoiseSpec::validate() const {
    if (!(sigma_p >= 0.0) || !std::isfinite(sigma_p)) {
        throw Error(ErrorKind::InvalidArgument, "sigma_p must be a finite non-negative number");
    }
    if (correlation == Correlation::Exponential && !(gamma >= 0.0 && gamma < 1.0)) {
        throw Error(ErrorKind::InvalidArgument,
                    "gamma must lie in [0, 1), got " + std::to_string(gamma));
    }
}

std::string_view to_string(SemanticGen g) noexcept {
    return g == SemanticGen::Fixed ? "fixed" : "clusters";
}

std::string_view to_string(PeFamily f) noexcept {
    switch (f) {
    case PeFamily::None: return "none";
    case PeFamily::Sinusoidal: return "sinusoidal";
    case PeFamily::Rotary: return "rotary";
    }
    return "none";
}

std::optional<SemanticGen> parse_semantic_gen(std::string_view name) noexcept {
    if (name == "clusters") return SemanticGen::GaussianClusters;
    if (name == "fixed") return SemanticGen::Fixed;
    return std::nullopt;
}

std::optional<PeFamily> parse_pe_family(std::string_view name) noexcept {
    if (name == "none") return PeFamily::None;
    if (name == "sinusoidal") return PeFamily::Sinusoidal;
    if (name == "rotary") return PeFamily::Rotary;
    return std::nullopt;
}

void SyntheticTokenModel::validate() const {
    if (n_context == 0 || n_query == 0 || dim == 0) {
        throw Error(ErrorKind::InvalidArgument, "synthetic model needs n_context, n_query, dim >= 1");
    }
    if (semantic == SemanticGen::GaussianClusters && n_clusters == 0) {
        throw Error(ErrorKind::InvalidArgument, "gaussian-cluster model needs at least one cluster");
    }
    if (pe != PeFamily::None && dim % 2 != 0) {
        throw Error(ErrorKind::InvalidArgument,
                    std::string(to_string(pe)) + " encoding requires an even dimension, got " +
                        std::to_string(dim));
    }
    noise.validate();
}

SyntheticSample generate(const SyntheticTokenModel& model, Rng& rng) {
    model.validate();
    const std::size_t n = model.n_context + model.n_query;
    const std::size_t d = model.dim;

    MatrixD means;
    std::vector<std::size_t> cluster_of(n, 0);
    MatrixD semantic(n, d);
    if (model.semantic == SemanticGen::GaussianClusters) {
        means = MatrixD(model.n_clusters, d);
        for (std::size_t c = 0; c < model.n_clusters; ++c) {
            for (std::size_t j = 0; j < d; ++j) {
                means(c, j) = rng.normal();
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            // Query rows all come from cluster 0 so one region is query-relevant.
            cluster_of[i] = i < model.n_context ? rng.below(model.n_clusters) : 0;
            for (std::size_t j = 0; j < d; ++j) {
                semantic(i, j) = means(cluster_of[i], j) + model.cluster_spread * rng.normal();
            }
        }
    } else {
        const double v = 1.0 / std::sqrt(static_cast<double>(d));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                semantic(i, j) = v;
            }
        }
    }

    std::vector<float> hidden(n * d);
    if (model.pe == PeFamily::Rotary) {
        for (std::size_t i = 0; i < n; ++i) {
            auto rotated = rope_rotate(semantic.row(i), static_cast<double>(i), model.pe_base);
            for (std::size_t j = 0; j < d; ++j) {
                hidden[i * d + j] = static_cast<float>(rotated[j]);
            }
        }
    } else {
        // AR(1) per dimension along the token axis yields corr(p_i, p_j) = gamma^|i-j|.
        const NoiseSpec& ns = model.noise;
        const double g = ns.correlation == Correlation::Exponential ? ns.gamma : 0.0;
        const double innov = std::sqrt(1.0 - g * g);
        std::vector<double> state(d, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> pe = model.pe == PeFamily::Sinusoidal
                                         ? sinusoidal_pe(static_cast<double>(i), d, model.pe_base)
                                         : std::vector<double>(d, 0.0);
            for (std::size_t j = 0; j < d; ++j) {
                const double z = ns.sigma_p * rng.normal();
                state[j] = i == 0 ? z : g * state[j] + innov * z;
                hidden[i * d + j] =
                    static_cast<float>(semantic(i, j) + model.pe_scale * pe[j] + state[j]);
            }
        }
    }

    std::vector<float> ctx(hidden.begin(), hidden.begin() + static_cast<std::ptrdiff_t>(model.n_context * d));
    std::vector<float> qry(hidden.begin() + static_cast<std::ptrdiff_t>(model.n_context * d), hidden.end());
    return SyntheticSample{HiddenStates(Matrix(model.n_context, d, std::move(ctx)),
                                        Matrix(model.n_query, d, std::move(qry))),
                           std::move(semantic), std::move(means), std::move(cluster_of)};
}

// ---------------------------------------------------------------------------

TieReport detect_ties(const HiddenStates& h, const CompressionConfig& cfg) {
    TieReport report;
    const std::vector<double> r = relevance_scores(h.context(), mean_pool(h.query()));
    std::vector<double> sorted = r;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i] - sorted[i - 1] <= kTieTolerance) {
            report.relevance_tie = true;
            break;
        }
    }

    const std::size_t k = num_compressed_tokens(h.n_context(), cfg.tau);
    std::vector<std::size_t> centers = cfg.variant == Variant::UniformSampleCenters
                                           ? uniform_centers(h.n_context(), k)
                                           : select_centers(r, k);
    std::vector<std::size_t> rest;
    std::vector<double> r_rest;
    for (std::size_t i = 0, c = 0; i < h.n_context(); ++i) {
        if (c < centers.size() && centers[c] == i) {
            ++c;
            continue;
        }
        rest.push_back(i);
        r_rest.push_back(cfg.variant == Variant::NoQuery ? 1.0 : r[i]);
    }
    if (cfg.variant != Variant::NoConsistencyMerging && k > 1) {
        const MatrixD v = assignment_scores(h.context().gather(rest), h.context().gather(centers), r_rest);
        for (std::size_t i = 0; i < v.rows() && !report.assignment_tie; ++i) {
            auto row = v.row(i);
            std::vector<double> top(row.begin(), row.end());
            std::partial_sort(top.begin(), top.begin() + 2, top.end(), std::greater<>());
            report.assignment_tie = top[0] - top[1] <= kTieTolerance;
        }
    }
    return report;
}

Matrix canonicalize_rows(const Matrix& m) {
    std::vector<std::size_t> order(m.rows());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        auto ra = m.row(a);
        auto rb = m.row(b);
        return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
    });
    return m.gather(order);
}

double permutation_deviation(const HiddenStates& h, const CompressionConfig& cfg,
                             std::span<const std::size_t> perm) {
    const HiddenStates permuted(h.context().gather(perm), h.query());
    const Matrix a = canonicalize_rows(run_compression(h, cfg).compressed);
    const Matrix b = canonicalize_rows(run_compression(permuted, cfg).compressed);
    double dev = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        dev = std::max(dev, std::abs(static_cast<double>(a.data()[i]) - b.data()[i]));
    }
    return dev;
}

PermutationReport permutation_invariance_check(const HiddenStates& h, const CompressionConfig& cfg,
                                               std::size_t trials, Rng& rng, double tolerance) {
    PermutationReport report;
    report.tolerance = tolerance;
    if (detect_ties(h, cfg).any()) {
        report.tie_detected = true;
        report.trials_skipped = trials;
        return report;
    }
    const std::size_t n = h.n_context();
    std::vector<std::size_t> perm(n);
    for (std::size_t t = 0; t < trials; ++t) {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        for (std::size_t i = n; i > 1; --i) {
            std::swap(perm[i - 1], perm[rng.below(i)]);
        }
        report.max_deviation = std::max(report.max_deviation, permutation_deviation(h, cfg, perm));
        ++report.trials_run;
    }
    report.passed = report.max_deviation <= tolerance;
    return report;
}

// ---------------------------------------------------------------------------

namespace {

ResidualReport residual_mc(std::size_t group_size, std::size_t dim, const NoiseSpec& noise,
                           std::vector<double> alpha, std::size_t trials, Rng& rng) {
    noise.validate();
    if (group_size == 0 || dim == 0 || trials == 0) {
        throw Error(ErrorKind::InvalidArgument, "residual estimator needs group_size, dim, trials >= 1");
    }
    const double g = noise.correlation == Correlation::Exponential ? noise.gamma : 0.0;
    const double innov = std::sqrt(1.0 - g * g);
    const double sigma = noise.sigma_p;

    std::vector<double> mean_eps(dim, 0.0);
    double sum_sq = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        double sq = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            double x = 0.0;
            double eps = 0.0;
            for (std::size_t i = 0; i < group_size; ++i) {
                const double z = sigma * rng.normal();
                x = i == 0 ? z : g * x + innov * z;
                eps += alpha[i] * x;
            }
            mean_eps[j] += eps;
            sq += eps * eps;
        }
        sum_sq += sq;
    }

    double cross = 0.0;
    for (std::size_t i = 0; i < group_size; ++i) {
        for (std::size_t j = 0; j < group_size; ++j) {
            const std::size_t lag = i > j ? i - j : j - i;
            cross += alpha[i] * alpha[j] * noise.rho(lag);
        }
    }

    ResidualReport report;
    report.group_size = group_size;
    report.dim = dim;
    report.trials = trials;
    report.empirical_mse = sum_sq / static_cast<double>(trials);
    report.predicted_mse = sigma * sigma * static_cast<double>(dim) * cross;
    report.relative_error = report.predicted_mse > 0.0
                                ? std::abs(report.empirical_mse - report.predicted_mse) / report.predicted_mse
                                : std::abs(report.empirical_mse);
    double m2 = 0.0;
    for (double m : mean_eps) {
        const double mm = m / static_cast<double>(trials);
        m2 += mm * mm;
    }
    report.mean_residual_norm = std::sqrt(m2);
    report.alpha = std::move(alpha);
    return report;
}

} // namespace

ResidualReport residual_variance_mc(std::size_t group_size, std::size_t dim, const NoiseSpec& noise,
                                    WeightMode weights, std::size_t trials, Rng& rng) {
    if (group_size == 0) {
        throw Error(ErrorKind::InvalidArgument, "group_size must be at least 1");
    }
    std::vector<double> alpha(group_size, 1.0 / static_cast<double>(group_size));
    if (weights == WeightMode::RandomSoftmax) {
        std::vector<double> w(group_size);
        for (double& x : w) {
            x = rng.normal();
        }
        alpha = softmax(w);
    }
    return residual_mc(group_size, dim, noise, std::move(alpha), trials, rng);
}

ResidualReport correlated_residual_mc(std::size_t group_size, double gamma, double sigma_p,
                                      std::size_t dim, std::size_t trials, Rng& rng) {
    if (!(gamma >= 0.0 && gamma < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "gamma must lie in [0, 1), got " + std::to_string(gamma));
    }
    const NoiseSpec noise{sigma_p, Correlation::Exponential, gamma};
    return residual_variance_mc(group_size, dim, noise, WeightMode::Uniform, trials, rng);
}

SinusoidalScan sinusoidal_residual_scan(std::span<const std::size_t> group_sizes, double omega,
                                        std::size_t dim, std::size_t trials, Rng& rng,
                                        PositionLaw law) {
    if (group_sizes.empty() || dim == 0 || trials == 0) {
        throw Error(ErrorKind::InvalidArgument, "sinusoidal scan needs sizes, dim and trials");
    }
    for (std::size_t i = 0; i < group_sizes.size(); ++i) {
        if (group_sizes[i] < 2 || (i > 0 && group_sizes[i] <= group_sizes[i - 1])) {
            throw Error(ErrorKind::InvalidArgument, "group sizes must be ascending and >= 2");
        }
    }
    const std::uint64_t range = 10 * group_sizes.back() + 1;

    SinusoidalScan scan;
    std::vector<double> pos;
    std::vector<double> eps(dim);
    for (std::size_t n : group_sizes) {
        pos.resize(n);
        const double a = 1.0 / static_cast<double>(n);
        double total = 0.0;
        for (std::size_t t = 0; t < trials; ++t) {
            if (law == PositionLaw::Identical) {
                std::fill(pos.begin(), pos.end(), static_cast<double>(rng.below(range)));
            } else {
                for (double& p : pos) {
                    p = static_cast<double>(rng.below(range));
                }
            }
            double sq = 0.0;
            for (std::size_t j = 0; j < dim; ++j) {
                const double freq = omega * static_cast<double>(j + 1);
                double e = 0.0;
                for (double p : pos) {
                    e += a * std::sin(p * freq);
                }
                sq += e * e;
            }
            total += sq;
        }
        scan.points.push_back({n, total / static_cast<double>(trials)});
    }

    scan.slope = std::numeric_limits<double>::quiet_NaN();
    const bool positive = std::all_of(scan.points.begin(), scan.points.end(),
                                      [](const ScanPoint& p) { return p.empirical_mse > 0.0; });
    if (positive && scan.points.size() >= 2) {
        double mx = 0, my = 0;
        for (const auto& p : scan.points) {
            mx += std::log(static_cast<double>(p.group_size));
            my += std::log(p.empirical_mse);
        }
        mx /= static_cast<double>(scan.points.size());
        my /= static_cast<double>(scan.points.size());
        double sxy = 0, sxx = 0;
        for (const auto& p : scan.points) {
            const double dx = std::log(static_cast<double>(p.group_size)) - mx;
            sxy += dx * (std::log(p.empirical_mse) - my);
            sxx += dx * dx;
        }
        scan.slope = sxy / sxx;
    }
    return scan;
}

std::vector<double> rope_residual(const MatrixD& semantic, std::span<const double> angles,
                                  std::span<const double> alpha) {
    const std::size_t n = semantic.rows();
    const std::size_t d = semantic.cols();
    require_even(d, "rope_residual");
    if (angles.size() != n || alpha.size() != n) {
        throw Error(ErrorKind::Dimension, "rope_residual: angles and weights must match the group size");
    }
    // Rotations are stored relative to the identity (cos - 1, sin) so a zero
    // angle contributes exactly nothing.
    std::vector<double> dc(n), ds(n);
    double mean_dc = 0.0, mean_ds = 0.0;
    std::vector<double> h_bar(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        dc[i] = std::cos(angles[i]) - 1.0;
        ds[i] = std::sin(angles[i]);
        mean_dc += alpha[i] * dc[i];
        mean_ds += alpha[i] * ds[i];
        for (std::size_t j = 0; j < d; ++j) {
            h_bar[j] += alpha[i] * semantic(i, j);
        }
    }
    std::vector<double> eps(d, 0.0);
    for (std::size_t p = 0; p < d / 2; ++p) {
        // (Rbar - I) hbar
        const double x = h_bar[2 * p], y = h_bar[2 * p + 1];
        eps[2 * p] += mean_dc * x - mean_ds * y;
        eps[2 * p + 1] += mean_ds * x + mean_dc * y;
    }
    for (std::size_t i = 0; i < n; ++i) {
        // a_i (R_i - Rbar) h_i
        const double c = dc[i] - mean_dc;
        const double s = ds[i] - mean_ds;
        for (std::size_t p = 0; p < d / 2; ++p) {
            const double x = semantic(i, 2 * p), y = semantic(i, 2 * p + 1);
            eps[2 * p] += alpha[i] * (c * x - s * y);
            eps[2 * p + 1] += alpha[i] * (s * x + c * y);
        }
    }
    return eps;
}

double RopeScan::at(double spread, std::size_t group_size) const {
    for (const auto& c : cells) {
        if (c.spread == spread && c.group_size == group_size) {
            return c.mean_residual_norm;
        }
    }
    throw Error(ErrorKind::InvalidArgument, "no scan cell for the requested spread and size");
}

RopeScan rope_residual_scan(std::span<const double> spreads, std::span<const std::size_t> group_sizes,
                            std::size_t dim, std::size_t trials, Rng& rng) {
    require_even(dim, "rope_residual_scan");
    if (spreads.empty() || group_sizes.empty() || trials == 0) {
        throw Error(ErrorKind::InvalidArgument, "rope scan needs spreads, sizes and trials");
    }
    for (double s : spreads) {
        if (!(s >= 0.0)) {
            throw Error(ErrorKind::InvalidArgument, "angular spreads must be non-negative");
        }
    }
    // Members scatter around the shared direction with this per-vector noise norm.
    constexpr double kClusterNoise = 0.5;
    const double noise_scale = kClusterNoise / std::sqrt(static_cast<double>(dim));

    RopeScan scan;
    for (double spread : spreads) {
        for (std::size_t n : group_sizes) {
            if (n == 0) {
                throw Error(ErrorKind::InvalidArgument, "group sizes must be positive");
            }
            MatrixD semantic(n, dim);
            std::vector<double> angles(n);
            const std::vector<double> alpha(n, 1.0 / static_cast<double>(n));
            double total = 0.0;
            for (std::size_t t = 0; t < trials; ++t) {
                const std::vector<double> mu = random_unit(dim, rng);
                for (std::size_t i = 0; i < n; ++i) {
                    double n2 = 0.0;
                    auto row = semantic.row(i);
                    for (std::size_t j = 0; j < dim; ++j) {
                        row[j] = mu[j] + noise_scale * rng.normal();
                        n2 += row[j] * row[j];
                    }
                    const double inv = 1.0 / std::sqrt(n2);
                    for (double& x : row) {
                        x *= inv;
                    }
                    angles[i] = rng.uniform(0.0, spread);
                }
                total += norm(std::span<const double>(rope_residual(semantic, angles, alpha)));
            }
            scan.cells.push_back({spread, n, total / static_cast<double>(trials)});
        }
    }

    std::vector<double> x1, x2, y;
    for (const auto& c : scan.cells) {
        x1.push_back(c.spread);
        x2.push_back(1.0 / std::sqrt(static_cast<double>(c.group_size)));
        y.push_back(c.mean_residual_norm);
    }
    std::tie(scan.c_spread, scan.c_size) = fit_two_terms(x1, x2, y);
    return scan;
}

// ---------------------------------------------------------------------------

NystromReport nystrom_assignment_matrix(const CompressionResult& result, const Matrix& context) {
    const std::size_t k = result.k();
    const std::size_t n = context.rows();
    if (result.group_of.size() != n || result.weights_alpha.size() != n ||
        result.compressed.rows() != k || result.compressed.cols() != context.cols()) {
        throw Error(ErrorKind::StructuralViolation, "compression result does not match the context shape");
    }
    NystromReport report{MatrixD(k, n)};
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t g = result.group_of[i];
        if (g >= k) {
            throw Error(ErrorKind::StructuralViolation,
                        "token " + std::to_string(i) + " is outside every group (ablation result?)");
        }
        if (!(result.weights_alpha[i] > 0.0)) {
            throw Error(ErrorKind::StructuralViolation,
                        "token " + std::to_string(i) + " has non-positive merge weight");
        }
        report.assignment(g, i) = result.weights_alpha[i];
    }
    for (std::size_t g = 0; g < k; ++g) {
        if (result.group_of[result.centers[g]] != g) {
            throw Error(ErrorKind::StructuralViolation,
                        "center " + std::to_string(result.centers[g]) + " not in its own group");
        }
        double row_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const bool in_group = result.group_of[i] == g;
            if ((report.assignment(g, i) != 0.0) != in_group) {
                throw Error(ErrorKind::StructuralViolation, "support of A row " + std::to_string(g) +
                                                                " differs from its group");
            }
            row_sum += report.assignment(g, i);
        }
        report.max_row_sum_error = std::max(report.max_row_sum_error, std::abs(row_sum - 1.0));
        for (std::size_t j = 0; j < context.cols(); ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += report.assignment(g, i) * static_cast<double>(context(i, j));
            }
            report.max_reconstruction_error = std::max(
                report.max_reconstruction_error, std::abs(acc - static_cast<double>(result.compressed(g, j))));
        }
    }
    if (report.max_reconstruction_error > 1e-5) {
        throw Error(ErrorKind::StructuralViolation,
                    "A * H deviates from the compressed rows by " +
                        std::to_string(report.max_reconstruction_error));
    }
    if (report.max_row_sum_error > 1e-6) {
        throw Error(ErrorKind::StructuralViolation,
                    "row sum of A deviates from 1 by " + std::to_string(report.max_row_sum_error));
    }
    return report;
}

std::size_t insert_position(std::size_t seq_len, double beta) {
    if (seq_len == 0) {
        throw Error(ErrorKind::InvalidArgument, "seq_len must be at least 1");
    }
    if (!(beta >= 0.0 && beta <= 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "beta must lie in [0, 1]");
    }
    return static_cast<std::size_t>(std::floor(static_cast<double>(seq_len) * beta)) + 1;
}

} // namespace seco
