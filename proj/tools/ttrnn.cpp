// ttrnn: synthetic data, feature audit, training, backtest and TT-core reports.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ttrnn/config.hpp"
#include "ttrnn/error.hpp"
#include "ttrnn/interpret.hpp"
#include "ttrnn/pipeline.hpp"
#include "ttrnn/text.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    std::vector<std::string> assignments;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("-c,--config", o.config_path, "key = value configuration file");
    cmd->add_option("--set", o.assignments, "override one key, e.g. --set epochs=5 (repeatable)");
    cmd->add_option("-o,--out", o.out, "output directory");
    cmd->add_option("--seed", o.seed, "run seed");
}

ttrnn::RunConfig resolve(const CommonOptions& o) {
    ttrnn::KeyValueConfig kv;
    if (!o.config_path.empty()) kv = ttrnn::KeyValueConfig::from_file(o.config_path);
    for (const auto& a : o.assignments) kv.set_assignment(a);
    if (o.out) kv.set("out", *o.out);
    if (o.seed) kv.set("seed", std::to_string(*o.seed));
    return ttrnn::RunConfig::from(kv);
}

std::string fmt(double v) { return ttrnn::text::format_double(v); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tensor-Train RNN forecasting toolkit"};
    app.require_subcommand(1);

    CommonOptions synth_opts, features_opts, train_opts, backtest_opts;

    auto* synth = app.add_subcommand("synth", "write a synthetic 4-class panel (CSV files + manifest.csv)");
    add_common(synth, synth_opts);

    auto* features = app.add_subcommand("features", "dump the raw feature panel to features.csv");
    add_common(features, features_opts);

    auto* train = app.add_subcommand("train", "train a TT-RNN on the training split");
    add_common(train, train_opts);
    bool dry_run = false;
    train->add_flag("--dry-run", dry_run, "validate config and report parameter counts only");

    auto* backtest = app.add_subcommand("backtest", "evaluate a checkpoint on the test split");
    add_common(backtest, backtest_opts);
    std::string checkpoint;
    backtest->add_option("--checkpoint", checkpoint, "checkpoint file (default <out>/checkpoint.txt)");

    auto* report = app.add_subcommand("report-cores", "rank TT cores by aggregate normalized change");
    std::string log_path, report_out = "out";
    report->add_option("--log", log_path, "core_changes.csv written by train")->required();
    report->add_option("-o,--out", report_out, "output directory");

    auto* decompose = app.add_subcommand("decompose", "TT-SVD of a dense tensor file");
    std::string input, output;
    std::optional<std::size_t> max_rank;
    std::optional<double> tolerance;
    decompose->add_option("-i,--input", input, "dense tensor file")->required();
    decompose->add_option("--output", output, "TT output file (default <input>.tt)");
    auto* rank_opt = decompose->add_option("--max-rank", max_rank, "cap on every internal rank");
    auto* tol_opt = decompose->add_option("--tolerance", tolerance, "relative Frobenius tolerance");
    rank_opt->excludes(tol_opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ttrnn::kExitOk : ttrnn::kExitConfig;
    }

    try {
        if (*synth) {
            const auto config = resolve(synth_opts);
            const auto panel = ttrnn::cmd_synth(config);
            std::cout << "wrote " << panel.instruments.size() << " instruments x "
                      << config.synth.days << " days to " << config.out_dir << "\n";
        } else if (*features) {
            const auto config = resolve(features_opts);
            const auto panel = ttrnn::cmd_features(config);
            std::cout << "target " << panel.target << ": " << panel.size() << " dates, "
                      << panel.train_count << " in training split\n";
        } else if (*train) {
            const auto config = resolve(train_opts);
            const auto s = ttrnn::cmd_train(config, dry_run);
            std::cout << "TT input layer parameters: " << s.parameters.tt_input_layer << "\n"
                      << "dense equivalent:          " << s.parameters.dense_input_layer << "\n";
            std::printf("compression:               %.1fx\n", s.parameters.compression());
            std::cout << "total model parameters:    " << s.parameters.total << "\n"
                      << "training samples:          " << s.train_samples << "\n";
            if (s.result) {
                std::cout << "train loss " << fmt(s.result->initial_loss) << " -> "
                          << fmt(s.result->epoch_loss.back()) << " after " << s.result->epoch_loss.size()
                          << " epochs; artifacts in " << config.out_dir << "\n";
            }
        } else if (*backtest) {
            const auto config = resolve(backtest_opts);
            const std::string ck = checkpoint.empty() ? config.out_dir + "/checkpoint.txt" : checkpoint;
            const auto r = ttrnn::cmd_backtest(config, ck);
            std::cout << "sharpe       " << (r.strategy.sharpe ? fmt(*r.strategy.sharpe) : "undefined") << "\n"
                      << "total return " << fmt(r.strategy.total_return) << "\n"
                      << "accuracy     " << (r.accuracy ? fmt(*r.accuracy) : "n/a") << "\n"
                      << "buy and hold " << fmt(r.baseline.total_return) << "\n";
        } else if (*report) {
            const auto ranking = ttrnn::cmd_report_cores(log_path, report_out);
            for (std::size_t k = 0; k < ranking.size(); ++k) {
                std::cout << k + 1 << ". core " << ranking[k].core << " (" << ranking[k].mode
                          << "): " << fmt(ranking[k].aggregate) << "\n";
            }
        } else if (*decompose) {
            const std::string out_path = output.empty() ? input + ".tt" : output;
            if (!max_rank && !tolerance) tolerance = 1e-12;
            const auto s = ttrnn::cmd_decompose(input, out_path, max_rank, tolerance);
            std::cout << "ranks " << ttrnn::text::join(s.ranks) << ", " << s.tt_entries << " of "
                      << s.dense_entries << " entries, relative error " << fmt(s.relative_error) << "\n";
        }
    } catch (const ttrnn::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ttrnn::exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ttrnn::kExitFailure;
    }
    return ttrnn::kExitOk;
}
