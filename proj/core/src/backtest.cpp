#include "ttrnn/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <json.hpp>

#include "ttrnn/error.hpp"
#include "ttrnn/text.hpp"

namespace ttrnn {

namespace {

TrackRecord track(std::span<const double> positions, std::span<const double> next_returns) {
    TrackRecord rec;
    rec.positions.assign(positions.begin(), positions.end());
    double cum = 0.0;
    for (std::size_t t = 0; t < positions.size(); ++t) {
        const double daily = positions[t] * next_returns[t];
        cum += daily;
        rec.daily_returns.push_back(daily);
        rec.cumulative_profit.push_back(cum);
    }
    rec.total_return = cum;
    if (rec.daily_returns.size() >= 2) {
        try {
            rec.sharpe = sharpe(rec.daily_returns);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::ZeroVariance) throw;
        }
    }
    return rec;
}

nlohmann::ordered_json track_json(const TrackRecord& rec) {
    nlohmann::ordered_json j;
    if (rec.sharpe) {
        j["sharpe"] = *rec.sharpe;
        j["sharpe_defined"] = true;
    } else {
        j["sharpe"] = nullptr;  // NaN has no JSON encoding
        j["sharpe_defined"] = false;
    }
    j["total_return"] = rec.total_return;
    j["days"] = rec.daily_returns.size();
    return j;
}

}  // namespace

std::vector<double> size_positions(std::span<const Probabilities> probs) {
    std::vector<double> out;
    out.reserve(probs.size());
    for (const auto& p : probs) {
        double sum = 0.0;
        for (double v : p) {
            if (!(v >= 0.0 && v <= 1.0)) {
                throw Error(ErrorKind::InvalidDistribution, "probability outside [0, 1]");
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            throw Error(ErrorKind::InvalidDistribution, "probabilities do not sum to 1");
        }
        out.push_back(std::clamp(p[class_index(+1)] - p[class_index(-1)], -1.0, 1.0));
    }
    return out;
}

BacktestReport run_backtest(std::span<const double> positions, std::span<const double> next_returns) {
    if (positions.size() != next_returns.size()) {
        throw Error(ErrorKind::LengthMismatch, std::to_string(positions.size()) + " positions vs " +
                                                   std::to_string(next_returns.size()) + " returns");
    }
    BacktestReport report;
    report.strategy = track(positions, next_returns);
    const std::vector<double> ones(positions.size(), 1.0);
    report.baseline = track(ones, next_returns);
    return report;
}

double sharpe(std::span<const double> daily_returns) {
    if (daily_returns.size() < 2) {
        throw Error(ErrorKind::LengthMismatch, "Sharpe needs at least two observations");
    }
    const double n = static_cast<double>(daily_returns.size());
    double sum = 0.0;
    for (double r : daily_returns) sum += r;
    const double mean = sum / n;
    double var = 0.0;
    for (double r : daily_returns) var += (r - mean) * (r - mean);
    const double sd = std::sqrt(var / n);
    const auto [lo, hi] = std::minmax_element(daily_returns.begin(), daily_returns.end());
    if (*lo == *hi || sd == 0.0) {
        throw Error(ErrorKind::ZeroVariance, "daily returns have zero variance");
    }
    return std::sqrt(kTradingDaysPerYear) * mean / sd;
}

double directional_accuracy(std::span<const int> predicted, std::span<const int> truth) {
    if (predicted.size() != truth.size()) {
        throw Error(ErrorKind::LengthMismatch, "prediction and label series differ in length");
    }
    if (predicted.empty()) throw Error(ErrorKind::LengthMismatch, "no predictions");
    std::size_t hits = 0;
    for (std::size_t t = 0; t < predicted.size(); ++t) hits += predicted[t] == truth[t];
    return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

std::vector<int> predicted_labels(std::span<const Probabilities> probs) {
    std::vector<int> out;
    out.reserve(probs.size());
    for (const auto& p : probs) {
        const auto it = std::max_element(p.begin(), p.end());
        out.push_back(label_of_class(static_cast<std::size_t>(it - p.begin())));
    }
    return out;
}

std::string report_json(const BacktestReport& report) {
    nlohmann::ordered_json j;
    j["sharpe"] = report.strategy.sharpe ? nlohmann::ordered_json(*report.strategy.sharpe) : nullptr;
    j["total_return"] = report.strategy.total_return;
    j["accuracy"] = report.accuracy ? nlohmann::ordered_json(*report.accuracy) : nullptr;
    j["strategy"] = track_json(report.strategy);
    j["baseline"] = track_json(report.baseline);
    return j.dump(2) + "\n";
}

void write_track_csv(std::ostream& os, const BacktestReport& report,
                     std::span<const std::string> dates) {
    const auto& s = report.strategy;
    if (dates.size() != s.positions.size()) {
        throw Error(ErrorKind::LengthMismatch, "dates do not match the track record");
    }
    os << "date,position,daily_return,cumulative_profit,baseline_cumulative\n";
    for (std::size_t t = 0; t < dates.size(); ++t) {
        os << dates[t] << ',' << text::format_double(s.positions[t]) << ','
           << text::format_double(s.daily_returns[t]) << ','
           << text::format_double(s.cumulative_profit[t]) << ','
           << text::format_double(report.baseline.cumulative_profit[t]) << '\n';
    }
}

}  // namespace ttrnn
