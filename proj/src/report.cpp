// SPDX-License-Identifier: Apache-2.0
#include "seco/report.hpp"

#include <cmath>

namespace seco {

namespace {

Json number_or_null(double x) {
    return std::isfinite(x) ? Json(x) : Json(nullptr);
}

Json numbers(const std::vector<double>& xs) {
    Json arr = Json::array();
    for (double x : xs) {
        arr.push_back(number_or_null(x));
    }
    return arr;
}

} // namespace

Json provenance_json(const CompressionResult& r, const HiddenStates& h, const CompressionConfig& cfg) {
    Json groups = Json::array();
    for (std::size_t g : r.group_of) {
        groups.push_back(g == kDroppedGroup ? Json(-1) : Json(g));
    }
    Json j;
    j["tau"] = cfg.tau;
    j["variant"] = std::string(to_string(cfg.variant));
    j["n_context"] = h.n_context();
    j["n_query"] = h.n_query();
    j["dim"] = h.dim();
    j["k"] = r.k();
    j["centers"] = r.centers;
    j["group_of"] = std::move(groups);
    j["alpha"] = numbers(r.weights_alpha);
    j["w"] = numbers(r.weights_w);
    j["relevance"] = numbers(r.relevance);
    return j;
}

Json to_json(const ResidualReport& r) {
    Json j;
    j["group_size"] = r.group_size;
    j["dim"] = r.dim;
    j["trials"] = r.trials;
    j["empirical_mse"] = r.empirical_mse;
    j["predicted_mse"] = r.predicted_mse;
    j["relative_error"] = r.relative_error;
    j["mean_residual_norm"] = r.mean_residual_norm;
    return j;
}

Json to_json(const PermutationReport& r) {
    Json j;
    j["passed"] = r.passed;
    j["tie_detected"] = r.tie_detected;
    j["trials_run"] = r.trials_run;
    j["trials_skipped"] = r.trials_skipped;
    j["max_deviation"] = r.max_deviation;
    j["tolerance"] = r.tolerance;
    return j;
}

Json to_json(const SinusoidalScan& s) {
    Json pts = Json::array();
    for (const auto& p : s.points) {
        pts.push_back({{"group_size", p.group_size}, {"empirical_mse", p.empirical_mse}});
    }
    return {{"points", std::move(pts)}, {"slope", number_or_null(s.slope)}};
}

Json to_json(const RopeScan& s) {
    Json cells = Json::array();
    for (const auto& c : s.cells) {
        cells.push_back({{"spread", c.spread},
                         {"group_size", c.group_size},
                         {"mean_residual_norm", c.mean_residual_norm}});
    }
    return {{"cells", std::move(cells)}, {"c_spread", s.c_spread}, {"c_size", s.c_size}};
}

Json to_json(const FlopsBreakdown& b) {
    Json j;
    j["encoder_prefill"] = b.encoder_prefill;
    j["selection"] = b.selection;
    j["assignment"] = b.assignment;
    j["merging"] = b.merging;
    j["generation"] = b.generation;
    j["total"] = b.total;
    return j;
}

std::string dump(const Json& j) {
    return j.dump(2) + "\n";
}

} // namespace seco
