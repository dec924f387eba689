// SPDX-License-Identifier: Apache-2.0
//
// seco: command-line front end.
//
//   seco compress      --context C --query Q --tau 16 --out OUT [--provenance P]
//   seco ablate        --context C --query Q --variant V --out OUT
//   seco verify SUITE  [--seed N] [--trials N] [--tolerance X] [--context C --query Q]
//   seco flops         --layers L --d-model D --context-len N [--compare-uncompressed]
//   seco gen-synthetic --out DIR [--seed N] [model flags]
//
// Exit codes: 0 success, 1 verification failure, 2 usage or format error,
// 3 numeric overflow, 4 I/O failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "seco/compress.hpp"
#include "seco/cost_model.hpp"
#include "seco/posbias.hpp"
#include "seco/report.hpp"
#include "seco/tensor_file.hpp"
#include "seco/verify.hpp"

namespace fs = std::filesystem;

namespace {

enum Exit : int { kOk = 0, kFailed = 1, kUsage = 2, kOverflow = 3, kIo = 4 };

int exit_code(seco::ErrorKind kind) {
    switch (kind) {
    case seco::ErrorKind::Overflow: return kOverflow;
    case seco::ErrorKind::Io: return kIo;
    case seco::ErrorKind::StructuralViolation:
    case seco::ErrorKind::Internal: return kFailed;
    default: return kUsage;
    }
}

struct RunConfig {
    std::size_t tau = 16;
    std::string variant = "default";
    std::uint64_t seed = 0;
    std::optional<std::size_t> trials;
    std::optional<double> tolerance;
};

void emit(const seco::Json& doc, const std::string& out_path) {
    const std::string text = seco::dump(doc);
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::trunc);
    if (!out || !(out << text)) {
        throw seco::Error(seco::ErrorKind::Io, "cannot write " + out_path);
    }
}

seco::HiddenStates load_states(const std::string& context, const std::string& query) {
    auto load = [](const std::string& path, const char* role) {
        try {
            return seco::read_tensor_file(path);
        } catch (const seco::Error& e) {
            // Missing inputs are usage errors, not output failures.
            const auto kind = e.kind() == seco::ErrorKind::Io ? seco::ErrorKind::InvalidArgument : e.kind();
            throw seco::Error(kind, std::string(role) + " file " + path + ": " + e.what());
        }
    };
    return seco::HiddenStates(load(context, "context"), load(query, "query"));
}

struct CompressArgs {
    std::string context;
    std::string query;
    std::string out;
    std::string provenance;
};

int run_compress(const CompressArgs& a, const RunConfig& rc, bool ablation) {
    const auto variant = seco::parse_variant(rc.variant);
    if (!variant) {
        throw seco::Error(seco::ErrorKind::InvalidArgument, "unknown variant '" + rc.variant + "'");
    }
    if (ablation && *variant == seco::Variant::Default) {
        throw seco::Error(seco::ErrorKind::InvalidArgument, "ablate needs a non-default --variant");
    }
    if (rc.tau == 0) {
        throw seco::Error(seco::ErrorKind::InvalidArgument, "--tau must be at least 1");
    }
    const seco::HiddenStates h = load_states(a.context, a.query);
    const seco::CompressionConfig cfg{rc.tau, *variant};
    const seco::CompressionResult result = seco::run_compression(h, cfg);

    seco::write_tensor_file(a.out, result.compressed);
    seco::Json prov = seco::provenance_json(result, h, cfg);
    prov["seed"] = rc.seed;
    emit(prov, a.provenance.empty() ? a.out + ".provenance.json" : a.provenance);
    return kOk;
}

struct VerifyArgs {
    std::string suite;
    std::string context;
    std::string query;
    std::string out;
    std::size_t tau = 4;
};

int run_verify(const VerifyArgs& a, const RunConfig& rc) {
    seco::VerifyOptions opts;
    opts.seed = rc.seed;
    opts.trials = rc.trials;
    opts.tolerance = rc.tolerance;
    opts.tau = a.tau;
    if (!a.context.empty() || !a.query.empty()) {
        if (a.context.empty() || a.query.empty()) {
            throw seco::Error(seco::ErrorKind::InvalidArgument, "--context and --query go together");
        }
        opts.perm_input = load_states(a.context, a.query);
    }
    const auto results = seco::run_verify(a.suite, opts);

    bool all_ok = true;
    seco::Json suites = seco::Json::object();
    for (const auto& r : results) {
        all_ok = all_ok && r.passed;
        seco::Json entry;
        entry["passed"] = r.passed;
        entry["metrics"] = r.metrics;
        suites[r.name] = std::move(entry);
    }
    seco::Json doc;
    doc["suite"] = a.suite;
    doc["seed"] = rc.seed;
    doc["passed"] = all_ok;
    doc["suites"] = std::move(suites);
    emit(doc, a.out);
    return all_ok ? kOk : kFailed;
}

struct FlopsArgs {
    seco::ModelShape shape;
    std::uint64_t d_ff = 0;
    std::uint64_t context_len = 0;
    std::uint64_t query_len = 0;
    std::uint64_t answer_len = 1;
    bool compare = false;
    std::string out;
};

int run_flops(FlopsArgs a, const RunConfig& rc) {
    a.shape.d_ff = a.d_ff != 0 ? a.d_ff : 4 * a.shape.d_model;
    a.shape.validate();
    if (a.context_len == 0 || rc.tau == 0 || a.answer_len == 0) {
        throw seco::Error(seco::ErrorKind::InvalidArgument,
                          "--context-len, --tau and --answer-len must be at least 1");
    }
    const std::uint64_t k = seco::num_compressed_tokens(a.context_len, rc.tau);
    const seco::FlopsBreakdown b =
        seco::end_to_end_flops(a.shape, a.context_len, a.query_len, a.answer_len, k);

    seco::Json doc;
    doc["shape"] = {{"n_layers", a.shape.n_layers}, {"d_model", a.shape.d_model},
                    {"d_ff", a.shape.d_ff},         {"n_heads", a.shape.n_heads},
                    {"vocab", a.shape.vocab},       {"include_vocab", a.shape.include_vocab}};
    doc["lengths"] = {{"context", a.context_len}, {"query", a.query_len},
                      {"answer", a.answer_len},   {"tau", rc.tau}, {"k", k}};
    doc["breakdown"] = seco::to_json(b);
    doc["overhead"] = b.overhead();
    doc["overhead_fraction"] = static_cast<double>(b.overhead()) / static_cast<double>(b.total);
    if (a.compare) {
        const seco::Flops full = seco::generation_flops(a.shape, a.context_len, a.query_len, a.answer_len);
        seco::Json cmp;
        // The uncompressed pipeline runs the same prefill and skips the compression stage.
        seco::Flops full_total = 0;
        if (__builtin_add_overflow(b.encoder_prefill, full, &full_total)) {
            throw seco::Error(seco::ErrorKind::Overflow, "FLOP count exceeds 64 bits");
        }
        cmp["uncompressed_generation"] = full;
        cmp["uncompressed_total"] = full_total;
        cmp["generation_ratio"] = static_cast<double>(b.generation) / static_cast<double>(full);
        cmp["total_ratio"] = static_cast<double>(b.total) / static_cast<double>(full_total);
        doc["compare_uncompressed"] = std::move(cmp);
    }
    emit(doc, a.out);
    return kOk;
}

struct SynthArgs {
    seco::SyntheticTokenModel model;
    std::string semantic = "clusters";
    std::string pe = "none";
    std::string out;
};

seco::Json matrix_json(const seco::MatrixD& m) {
    seco::Json rows = seco::Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto r = m.row(i);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    return rows;
}

int run_gen_synthetic(SynthArgs a, const RunConfig& rc) {
    const auto sem = seco::parse_semantic_gen(a.semantic);
    const auto pe = seco::parse_pe_family(a.pe);
    if (!sem || !pe) {
        throw seco::Error(seco::ErrorKind::InvalidArgument, "unknown --semantic or --pe value");
    }
    a.model.semantic = *sem;
    a.model.pe = *pe;
    a.model.noise.correlation =
        a.model.noise.gamma > 0.0 ? seco::Correlation::Exponential : seco::Correlation::None;
    a.model.validate();

    seco::Rng rng(rc.seed);
    const seco::SyntheticSample sample = seco::generate(a.model, rng);

    std::error_code ec;
    fs::create_directories(a.out, ec);
    if (ec) {
        throw seco::Error(seco::ErrorKind::Io, "cannot create " + a.out + ": " + ec.message());
    }
    const fs::path dir(a.out);
    seco::write_tensor_file(dir / "context.seco", sample.states.context());
    seco::write_tensor_file(dir / "query.seco", sample.states.query());

    const auto& m = a.model;
    seco::Json manifest;
    manifest["seed"] = rc.seed;
    manifest["n_context"] = m.n_context;
    manifest["n_query"] = m.n_query;
    manifest["dim"] = m.dim;
    manifest["semantic"] = std::string(seco::to_string(m.semantic));
    manifest["n_clusters"] = m.semantic == seco::SemanticGen::GaussianClusters ? m.n_clusters : 0;
    manifest["cluster_spread"] = m.cluster_spread;
    manifest["sigma_p"] = m.noise.sigma_p;
    manifest["gamma"] = m.noise.gamma;
    manifest["pe"] = std::string(seco::to_string(m.pe));
    manifest["pe_scale"] = m.pe_scale;
    manifest["pe_base"] = m.pe_base;
    manifest["files"] = {{"context", "context.seco"}, {"query", "query.seco"}};
    manifest["cluster_means"] = matrix_json(sample.cluster_means);
    manifest["cluster_of"] = sample.cluster_of;
    manifest["semantic_vectors"] = matrix_json(sample.semantic);
    emit(manifest, (dir / "manifest.json").string());
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Query-guided semantic context compression toolkit", "seco"};
    app.set_config("--config", "", "Read flags from a TOML/INI file");
    app.require_subcommand(1);

    RunConfig rc;

    CompressArgs compress_args;
    auto* compress = app.add_subcommand("compress", "Compress context hidden states");
    compress->add_option("--context", compress_args.context, "Context tensor file (N_c x d)")->required();
    compress->add_option("--query", compress_args.query, "Query tensor file (N_q x d)")->required();
    compress->add_option("--tau", rc.tau, "Compression rate")->capture_default_str();
    compress->add_option("--variant", rc.variant, "default | no-query | no-consistency-merging | uniform-sample-centers")
        ->capture_default_str();
    compress->add_option("--seed", rc.seed, "Echoed into the provenance document");
    compress->add_option("--out", compress_args.out, "Output tensor file (K x d)")->required();
    compress->add_option("--provenance", compress_args.provenance,
                         "Provenance JSON path (default: <out>.provenance.json)");

    CompressArgs ablate_args;
    auto* ablate = app.add_subcommand("ablate", "Compress with an ablation variant");
    ablate->add_option("--context", ablate_args.context, "Context tensor file")->required();
    ablate->add_option("--query", ablate_args.query, "Query tensor file")->required();
    ablate->add_option("--tau", rc.tau, "Compression rate")->capture_default_str();
    ablate->add_option("--variant", rc.variant, "no-query | no-consistency-merging | uniform-sample-centers")
        ->required();
    ablate->add_option("--seed", rc.seed, "Echoed into the provenance document");
    ablate->add_option("--out", ablate_args.out, "Output tensor file")->required();
    ablate->add_option("--provenance", ablate_args.provenance, "Provenance JSON path");

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand("verify", "Run position-bias verification suites");
    verify->add_option("suite", verify_args.suite,
                       "perm | attenuation | correlated | sinusoidal | rope | nystrom | all")
        ->required();
    verify->add_option("--seed", rc.seed, "Base seed")->capture_default_str();
    verify->add_option("--trials", rc.trials, "Override trial counts");
    verify->add_option("--tolerance", rc.tolerance, "Override the primary tolerance");
    verify->add_option("--tau", verify_args.tau, "Compression rate for perm")->capture_default_str();
    verify->add_option("--context", verify_args.context, "Context tensor for perm");
    verify->add_option("--query", verify_args.query, "Query tensor for perm");
    verify->add_option("--out", verify_args.out, "Write the report here instead of stdout");

    FlopsArgs flops_args;
    auto* flops = app.add_subcommand("flops", "Analytical FLOPs breakdown");
    flops->add_option("--layers", flops_args.shape.n_layers, "Transformer layers")->required();
    flops->add_option("--d-model", flops_args.shape.d_model, "Hidden width")->required();
    flops->add_option("--d-ff", flops_args.d_ff, "Feed-forward width (default 4 d-model)");
    flops->add_option("--heads", flops_args.shape.n_heads, "Attention heads")->capture_default_str();
    flops->add_option("--vocab", flops_args.shape.vocab, "Vocabulary size")->capture_default_str();
    flops->add_flag("--include-vocab", flops_args.shape.include_vocab, "Count the output projection");
    flops->add_option("--context-len", flops_args.context_len, "Context tokens L_c")->required();
    flops->add_option("--query-len", flops_args.query_len, "Query tokens L_q")->capture_default_str();
    flops->add_option("--answer-len", flops_args.answer_len, "Generated tokens L_a")->capture_default_str();
    flops->add_option("--tau", rc.tau, "Compression rate")->capture_default_str();
    flops->add_flag("--compare-uncompressed", flops_args.compare, "Also report the uncompressed baseline");
    flops->add_option("--out", flops_args.out, "Write the document here instead of stdout");

    SynthArgs synth_args;
    auto& model = synth_args.model;
    auto* synth = app.add_subcommand("gen-synthetic", "Write synthetic hidden states");
    synth->add_option("--n-context", model.n_context, "Context tokens")->capture_default_str();
    synth->add_option("--n-query", model.n_query, "Query tokens")->capture_default_str();
    synth->add_option("--dim", model.dim, "Hidden width")->capture_default_str();
    synth->add_option("--semantic", synth_args.semantic, "clusters | fixed")->capture_default_str();
    synth->add_option("--clusters", model.n_clusters, "Number of gaussian clusters")->capture_default_str();
    synth->add_option("--cluster-spread", model.cluster_spread, "Std of members around a cluster mean")
        ->capture_default_str();
    synth->add_option("--sigma-p", model.noise.sigma_p, "Positional noise std")->capture_default_str();
    synth->add_option("--gamma", model.noise.gamma, "AR(1) noise correlation in [0, 1)")->capture_default_str();
    synth->add_option("--pe", synth_args.pe, "none | sinusoidal | rotary")->capture_default_str();
    synth->add_option("--pe-scale", model.pe_scale, "Sinusoidal amplitude")->capture_default_str();
    synth->add_option("--seed", rc.seed, "Generator seed")->capture_default_str();
    synth->add_option("--out", synth_args.out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n";
        const auto subs = app.get_subcommands();
        std::cerr << (subs.empty() ? app.help() : subs.front()->help());
        return kUsage;
    }

    try {
        if (*compress) return run_compress(compress_args, rc, false);
        if (*ablate) return run_compress(ablate_args, rc, true);
        if (*verify) return run_verify(verify_args, rc);
        if (*flops) return run_flops(flops_args, rc);
        if (*synth) return run_gen_synthetic(synth_args, rc);
    } catch (const seco::Error& e) {
        std::cerr << "error (" << seco::to_string(e.kind()) << "): " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailed;
    }
    return kUsage;
}
