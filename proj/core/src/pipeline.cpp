#include "ttrnn/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ttrnn/checkpoint.hpp"
#include "ttrnn/text.hpp"
#include "ttrnn/tt_format.hpp"

namespace fs = std::filesystem;

namespace ttrnn {

namespace {

fs::path ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::IOFailure, "cannot create " + dir + ": " + ec.message());
    return fs::path(dir);
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw Error(ErrorKind::IOFailure, "cannot write " + p.string());
    return os;
}

std::string read_file(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    if (!is) throw Error(ErrorKind::IOFailure, "cannot read " + p.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

/// Content hashes of every input file, keyed by path as given in the manifest.
nlohmann::ordered_json input_hashes(const RunConfig& config) {
    nlohmann::ordered_json j;
    if (config.manifest.empty()) {
        j["source"] = "synthetic";
        return j;
    }
    j["source"] = "manifest";
    j["manifest"] = text::hex64(text::fnv1a(read_file(config.manifest)));
    auto& files = j["files"] = nlohmann::ordered_json::object();
    const fs::path base = fs::path(config.manifest).parent_path();
    for (const auto& e : read_manifest(config.manifest)) {
        const fs::path p = fs::path(e.path).is_absolute() ? fs::path(e.path) : base / e.path;
        files[e.path] = text::hex64(text::fnv1a(read_file(p)));
    }
    return j;
}

void check_model_matches(const ModelDims& dims, const FeaturePanel& panel) {
    if (dims.input_dims != panel.input_dims()) {
        throw Error(ErrorKind::ShapeMismatch,
                    "model input dims " + Shape(dims.input_dims).to_string() +
                        " do not match feature tensor " + Shape(panel.input_dims()).to_string());
    }
}

}  // namespace

int exit_code_for(const Error& e) noexcept {
    switch (e.category()) {
        case ErrorCategory::Config: return kExitConfig;
        case ErrorCategory::Data: return kExitData;
        case ErrorCategory::Shape: return kExitShape;
        case ErrorCategory::Io: return kExitData;
        case ErrorCategory::Numeric: return kExitFailure;
    }
    return kExitFailure;
}

AssetPanel load_run_panel(const RunConfig& config) {
    if (!config.manifest.empty()) return load_panel(config.manifest);
    return synth_panel(config.synth, config.seed);
}

FeaturePanel build_features(const RunConfig& config) {
    return assemble(load_run_panel(config), config.target, config.split);
}

AssetPanel cmd_synth(const RunConfig& config) {
    AssetPanel panel = synth_panel(config.synth, config.seed);
    save_panel(panel, config.out_dir);
    return panel;
}

FeaturePanel cmd_features(const RunConfig& config) {
    FeaturePanel panel = build_features(config);
    const fs::path dir = ensure_dir(config.out_dir);
    auto os = open_out(dir / "features.csv");
    write_feature_csv(os, panel);
    return panel;
}

ParameterReport parameter_report(const ModelDims& dims) {
    dims.validate();
    ParameterReport r;
    r.tt_input_layer = tt_param_count(dims.input_dims, dims.hidden_dims, dims.ranks);
    r.dense_input_layer = dims.input_size() * dims.hidden_size();
    const std::size_t m = dims.hidden_size();
    r.total = r.tt_input_layer + m + m * m + kNumClasses * m + kNumClasses;
    return r;
}

TrainSummary cmd_train(const RunConfig& config, bool dry_run) {
    config.validate();
    const ModelDims dims = config.model_dims();
    TrainSummary summary;
    summary.parameters = parameter_report(dims);

    const FeaturePanel panel = build_features(config);
    check_model_matches(dims, panel);
    const SampleSet train_set = train_samples(panel, config.train.seq_len);
    summary.train_samples = train_set.samples.size();
    if (train_set.samples.empty()) {
        throw Error(ErrorKind::EmptyDataset, "training split is shorter than seq_len");
    }

    const fs::path dir = ensure_dir(config.out_dir);
    nlohmann::ordered_json manifest;
    manifest["command"] = dry_run ? "train --dry-run" : "train";
    manifest["config"] = config.resolved().entries();
    manifest["seed"] = config.seed;
    manifest["inputs"] = input_hashes(config);
    manifest["parameters"] = {{"tt_input_layer", summary.parameters.tt_input_layer},
                              {"dense_input_layer", summary.parameters.dense_input_layer},
                              {"compression_ratio", summary.parameters.compression()},
                              {"total", summary.parameters.total}};
    manifest["train_samples"] = summary.train_samples;
    manifest["feature_dates"] = panel.size();
    manifest["train_dates"] = panel.train_count;

    if (!dry_run) {
        TTRNNModel model = config.init == "zero" ? zero_model(dims) : init_model(dims, config.seed);
        TrainResult result = train(std::move(model), train_set.samples, config.train);

        save_checkpoint((dir / "checkpoint.txt").string(), result.model,
                        CheckpointMeta{config.seed, config.train.epochs});
        {
            auto os = open_out(dir / "core_changes.csv");
            write_core_change_csv(os, result.core_changes);
        }
        {
            auto os = open_out(dir / "training_log.csv");
            os << "epoch,train_loss\n";
            os << 0 << ',' << text::format_double(result.initial_loss) << '\n';
            for (std::size_t e = 0; e < result.epoch_loss.size(); ++e) {
                os << e + 1 << ',' << text::format_double(result.epoch_loss[e]) << '\n';
            }
        }
        manifest["initial_train_loss"] = result.initial_loss;
        manifest["final_train_loss"] = result.epoch_loss.back();
        summary.result = std::move(result);
    }

    auto os = open_out(dir / "run_manifest.json");
    os << manifest.dump(2) << '\n';
    return summary;
}

BacktestReport cmd_backtest(const RunConfig& config, const std::string& checkpoint_path) {
    config.validate();
    const Checkpoint ck = load_checkpoint(checkpoint_path);
    const FeaturePanel panel = build_features(config);
    check_model_matches(ck.model.dims(), panel);

    const SampleSet test = test_samples(panel, config.train.seq_len);
    if (test.samples.empty()) throw Error(ErrorKind::EmptyDataset, "test split is empty");

    std::vector<Probabilities> probs;
    std::vector<double> next_returns;
    std::vector<int> truth;
    std::vector<std::string> dates;
    for (std::size_t k = 0; k < test.samples.size(); ++k) {
        probs.push_back(predict(ck.model, test.samples[k].steps));
        const std::size_t t = test.end_index[k];
        next_returns.push_back(panel.next_returns[t]);
        truth.push_back(panel.labels[t]);
        dates.push_back(panel.dates[t]);
    }
    const auto positions = size_positions(probs);
    BacktestReport report = run_backtest(positions, next_returns);
    report.accuracy = directional_accuracy(predicted_labels(probs), truth);

    const fs::path dir = ensure_dir(config.out_dir);
    {
        auto os = open_out(dir / "backtest.json");
        os << report_json(report);
    }
    auto os = open_out(dir / "backtest.csv");
    write_track_csv(os, report, dates);
    return report;
}

std::vector<ModalImportance> cmd_report_cores(const std::string& core_change_csv,
                                              const std::string& out_dir) {
    std::ifstream is(core_change_csv, std::ios::binary);
    if (!is) throw Error(ErrorKind::IOFailure, "cannot read " + core_change_csv);
    const CoreChangeLog log = read_core_change_csv(is);
    const auto ranking = modal_ranking(log);

    const fs::path dir = ensure_dir(out_dir);
    {
        auto os = open_out(dir / "core_ranking.json");
        os << ranking_json(log);
    }
    auto os = open_out(dir / "core_ranking.csv");
    os << "rank,core,mode,aggregate_change\n";
    for (std::size_t k = 0; k < ranking.size(); ++k) {
        os << k + 1 << ',' << ranking[k].core << ',' << ranking[k].mode << ','
           << text::format_double(ranking[k].aggregate) << '\n';
    }
    return ranking;
}

DecomposeSummary cmd_decompose(const std::string& tensor_path, const std::string& output_path,
                               std::optional<std::size_t> max_rank, std::optional<double> tolerance) {
    if (max_rank.has_value() == tolerance.has_value()) {
        throw Error(ErrorKind::InvalidConfig, "give exactly one of max_rank or tolerance");
    }
    std::ifstream is(tensor_path, std::ios::binary);
    if (!is) throw Error(ErrorKind::IOFailure, "cannot read " + tensor_path);
    const DenseTensor t = read_dense_tensor(is);

    TTVector tt;
    if (max_rank) {
        if (*max_rank == 0) throw Error(ErrorKind::InvalidRank, "max_rank must be positive");
        const auto caps = tt_max_ranks(t.shape().dims());
        std::vector<std::size_t> ranks(caps.size(), 1);
        for (std::size_t n = 1; n + 1 < ranks.size(); ++n) ranks[n] = std::min(*max_rank, caps[n]);
        tt = tt_svd(t, ranks);
    } else {
        tt = tt_svd(t, *tolerance);
    }

    const DenseTensor back = tt_reconstruct(tt);
    const double norm = std::sqrt(frobenius_norm_sq(t));
    DecomposeSummary s;
    s.ranks = tt.ranks();
    s.dense_entries = t.size();
    s.tt_entries = tt.parameter_count();
    s.relative_error = norm > 0.0 ? std::sqrt(frobenius_norm_sq(back - t)) / norm : 0.0;

    std::ofstream os(output_path, std::ios::binary);
    if (!os) throw Error(ErrorKind::IOFailure, "cannot write " + output_path);
    write_tt_vector(os, tt);
    return s;
}

}  // namespace ttrnn
