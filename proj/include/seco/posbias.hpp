// SPDX-License-Identifier: Apache-2.0
//
// Numerical checks for the position-bias properties of the merge operator:
// positional encodings, Monte Carlo residual estimators, permutation
// invariance, and the linear-map (Nystrom-style) structure of the output.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "seco/compress.hpp"
#include "seco/rng.hpp"
#include "seco/tensor.hpp"

namespace seco {

inline constexpr double kDefaultPeBase = 10000.0;

/// Entry 2j = sin(pos / base^(2j/d)), entry 2j+1 = cos(same). `dim` must be even.
std::vector<double> sinusoidal_pe(double position, std::size_t dim, double base = kDefaultPeBase);

/// Rotates pair (2j, 2j+1) by position / base^(2j/d). Length must be even.
std::vector<double> rope_rotate(std::span<const double> h, double position,
                                double base = kDefaultPeBase);

// ---------------------------------------------------------------------------
// Synthetic token model

enum class Correlation { None, Exponential };

struct NoiseSpec {
    double sigma_p = 1.0;                       // Sigma_p = sigma_p^2 I_d
    Correlation correlation = Correlation::None;
    double gamma = 0.0;                         // rho(l) = gamma^l, 0 <= gamma < 1

    double rho(std::size_t lag) const;
    void validate() const;
};

enum class SemanticGen { GaussianClusters, Fixed };
enum class PeFamily { None, Sinusoidal, Rotary };

std::string_view to_string(SemanticGen g) noexcept;
std::string_view to_string(PeFamily f) noexcept;
std::optional<SemanticGen> parse_semantic_gen(std::string_view name) noexcept;
std::optional<PeFamily> parse_pe_family(std::string_view name) noexcept;

struct SyntheticTokenModel {
    std::size_t n_context = 64;
    std::size_t n_query = 4;
    std::size_t dim = 16;
    SemanticGen semantic = SemanticGen::GaussianClusters;
    std::size_t n_clusters = 4;
    double cluster_spread = 0.1; // per-dimension std of s_i around its cluster mean
    NoiseSpec noise{0.1, Correlation::None, 0.0};
    PeFamily pe = PeFamily::None;
    double pe_scale = 1.0;       // amplitude of the sinusoidal table in p_i
    double pe_base = kDefaultPeBase;

    void validate() const;
};

struct SyntheticSample {
    HiddenStates states;
    MatrixD semantic;       // s_i for context rows followed by query rows
    MatrixD cluster_means;  // empty for SemanticGen::Fixed
    std::vector<std::size_t> cluster_of; // per row of `semantic`
};

/// Additive families: h_i = s_i + p_i. Rotary: h_i = R_i s_i. Token positions
/// run 0..n_context-1 for context and continue through the query.
SyntheticSample generate(const SyntheticTokenModel& model, Rng& rng);

// ---------------------------------------------------------------------------
// Permutation invariance

struct TieReport {
    bool relevance_tie = false;
    bool assignment_tie = false;
    bool any() const noexcept { return relevance_tie || assignment_tie; }
};

/// Scores closer than this are treated as tied.
inline constexpr double kTieTolerance = 1e-9;

TieReport detect_ties(const HiddenStates& h, const CompressionConfig& cfg);

struct PermutationReport {
    bool passed = true;
    bool tie_detected = false;
    std::size_t trials_run = 0;
    std::size_t trials_skipped = 0;
    double max_deviation = 0.0;
    double tolerance = 1e-5;
};

/// Sorts rows lexicographically.
Matrix canonicalize_rows(const Matrix& m);

/// Max element-wise difference between the canonicalized outputs of the
/// original and a permuted context, over `trials` random permutations.
/// Inputs with tied scores skip every trial and still pass.
PermutationReport permutation_invariance_check(const HiddenStates& h, const CompressionConfig& cfg,
                                               std::size_t trials, Rng& rng,
                                               double tolerance = 1e-5);

/// Same comparison for one explicit permutation of the context rows.
double permutation_deviation(const HiddenStates& h, const CompressionConfig& cfg,
                             std::span<const std::size_t> perm);

// ---------------------------------------------------------------------------
// Residual estimators

enum class WeightMode { Uniform, RandomSoftmax };

struct ResidualReport {
    std::size_t group_size = 0;
    std::size_t dim = 0;
    std::size_t trials = 0;
    double empirical_mse = 0.0;
    double predicted_mse = 0.0;
    double relative_error = 0.0;
    double mean_residual_norm = 0.0; // |component-wise mean of eps over trials|
    std::vector<double> alpha;
};

/// eps = sum_i alpha_i p_i with p_i ~ N(0, sigma_p^2 I_d), optionally
/// AR(1)-correlated across i. Prediction: sigma_p^2 d sum_ij a_i a_j rho(|i-j|).
ResidualReport residual_variance_mc(std::size_t group_size, std::size_t dim, const NoiseSpec& noise,
                                    WeightMode weights, std::size_t trials, Rng& rng);

/// Uniform weights, rho(l) = gamma^l.
ResidualReport correlated_residual_mc(std::size_t group_size, double gamma, double sigma_p,
                                      std::size_t dim, std::size_t trials, Rng& rng);

enum class PositionLaw {
    Uniform,   // members drawn iid from [0, 10 * max group size]
    Identical, // one draw shared by the whole group (degenerate control)
};

struct ScanPoint {
    std::size_t group_size;
    double empirical_mse;
};

struct SinusoidalScan {
    std::vector<ScanPoint> points;
    double slope; // least-squares slope of log mse on log group size; NaN if undefined
};

/// eps_j = (1/n) sum_i sin(pos_i * omega * (j + 1)) for j in [0, dim).
SinusoidalScan sinusoidal_residual_scan(std::span<const std::size_t> group_sizes, double omega,
                                        std::size_t dim, std::size_t trials, Rng& rng,
                                        PositionLaw law = PositionLaw::Uniform);

/// Residual of rotating each h_i by its own angle, via the mean-plus-fluctuation
/// split: sum_i a_i (R_i - Rbar) h_i + (Rbar - I) hbar. Every coordinate pair
/// of row i is rotated by angles[i].
std::vector<double> rope_residual(const MatrixD& semantic, std::span<const double> angles,
                                  std::span<const double> alpha);

struct RopeCell {
    double spread;
    std::size_t group_size;
    double mean_residual_norm;
};

struct RopeScan {
    std::vector<RopeCell> cells;
    double c_spread = 0.0; // coefficient of spread
    double c_size = 0.0;   // coefficient of group_size^(-1/2)

    double at(double spread, std::size_t group_size) const;
};

/// Semantic vectors are unit-norm members of a random cluster (shared mean
/// direction per trial); angles are uniform in [0, spread].
RopeScan rope_residual_scan(std::span<const double> spreads, std::span<const std::size_t> group_sizes,
                            std::size_t dim, std::size_t trials, Rng& rng);

// ---------------------------------------------------------------------------
// Linear-map structure

struct NystromReport {
    MatrixD assignment;             // K x N_c, A_ki = alpha_i [i in G_k]
    double max_reconstruction_error = 0.0;
    double max_row_sum_error = 0.0;
};

/// Materializes A and verifies A * context == compressed (1e-5), unit row sums
/// (1e-6) and support == group. Throws StructuralViolation on failure.
NystromReport nystrom_assignment_matrix(const CompressionResult& result, const Matrix& context);

/// floor(seq_len * beta) + 1.
std::size_t insert_position(std::size_t seq_len, double beta);

} // namespace seco
