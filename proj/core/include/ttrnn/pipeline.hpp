#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ttrnn/backtest.hpp"
#include "ttrnn/config.hpp"
#include "ttrnn/error.hpp"
#include "ttrnn/features.hpp"
#include "ttrnn/interpret.hpp"
#include "ttrnn/neural.hpp"

namespace ttrnn {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitShape = 4;

int exit_code_for(const Error& e) noexcept;

/// CSV panel from `manifest`, or the synthetic panel for the run seed.
AssetPanel load_run_panel(const RunConfig& config);
FeaturePanel build_features(const RunConfig& config);

/// Writes the instrument CSVs and manifest.csv into config.out_dir.
AssetPanel cmd_synth(const RunConfig& config);

/// Writes features.csv (raw features, one row per date and instrument).
FeaturePanel cmd_features(const RunConfig& config);

struct ParameterReport {
    std::size_t tt_input_layer = 0;  // TT cores of W_xh
    std::size_t dense_input_layer = 0;  // M * P
    std::size_t total = 0;  // every trainable parameter of the model
    double compression() const noexcept {
        return tt_input_layer ? static_cast<double>(dense_input_layer) / static_cast<double>(tt_input_layer) : 0.0;
    }
};

ParameterReport parameter_report(const ModelDims& dims);

struct TrainSummary {
    ParameterReport parameters;
    std::size_t train_samples = 0;
    std::optional<TrainResult> result;  // empty for a dry run
};

/// Trains on the training split and writes checkpoint.txt, core_changes.csv,
/// training_log.csv and run_manifest.json. A dry run validates the configuration,
/// reports parameter counts and writes only the manifest.
TrainSummary cmd_train(const RunConfig& config, bool dry_run = false);

/// Evaluates a checkpoint on the test split; writes backtest.json and backtest.csv.
BacktestReport cmd_backtest(const RunConfig& config, const std::string& checkpoint_path);

/// Reads a core-change CSV and writes core_ranking.json and core_ranking.csv to out_dir.
std::vector<ModalImportance> cmd_report_cores(const std::string& core_change_csv,
                                              const std::string& out_dir);

struct DecomposeSummary {
    std::vector<std::size_t> ranks;
    std::size_t dense_entries = 0;
    std::size_t tt_entries = 0;
    double relative_error = 0.0;
};

/// TT-SVD of a dense tensor file; either `max_rank` (applied to every internal rank)
/// or `tolerance` (relative) selects the truncation.
DecomposeSummary cmd_decompose(const std::string& tensor_path, const std::string& output_path,
                               std::optional<std::size_t> max_rank, std::optional<double> tolerance);

}  // namespace ttrnn
