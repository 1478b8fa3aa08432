#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ttrnn/neural.hpp"

namespace ttrnn {

inline constexpr double kTradingDaysPerYear = 252.0;

struct TrackRecord {
    std::vector<double> positions;
    std::vector<double> daily_returns;
    std::vector<double> cumulative_profit;
    /// Annualized Sharpe; empty when the daily returns have zero variance.
    std::optional<double> sharpe;
    double total_return = 0.0;
};

struct BacktestReport {
    TrackRecord strategy;
    TrackRecord baseline;  // buy-and-hold: constant position 1
    /// Directional accuracy of the predictions; empty when no labels were supplied.
    std::optional<double> accuracy;
};

/// position_t = p(+1) - p(-1). Throws InvalidDistribution.
std::vector<double> size_positions(std::span<const Probabilities> probs);

/// Daily return position_t * r_{t+1}, accumulated additively (log-return space), plus
/// the buy-and-hold baseline. `next_returns[t]` is the target's return from t to t+1.
/// Throws LengthMismatch.
BacktestReport run_backtest(std::span<const double> positions, std::span<const double> next_returns);

/// sqrt(252) * mean / population std. Throws ZeroVariance (and LengthMismatch for < 2 points).
double sharpe(std::span<const double> daily_returns);

/// Fraction of exact matches between predicted and true labels.
double directional_accuracy(std::span<const int> predicted, std::span<const int> truth);

/// Argmax class of each distribution, as a label in {+1, 0, -1}.
std::vector<int> predicted_labels(std::span<const Probabilities> probs);

/// Metrics as JSON (strategy, baseline, accuracy).
std::string report_json(const BacktestReport& report);
/// date,position,daily_return,cumulative_profit,baseline_cumulative
void write_track_csv(std::ostream& os, const BacktestReport& report,
                     std::span<const std::string> dates);

}  // namespace ttrnn
