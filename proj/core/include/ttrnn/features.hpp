#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ttrnn/neural.hpp"
#include "ttrnn/tensor.hpp"

namespace ttrnn {

enum class AssetClass { Equities = 0, Currencies = 1, Commodities = 2, FixedIncome = 3 };

inline constexpr std::size_t kNumAssetClasses = 4;
inline constexpr std::size_t kDefaultComponentsPerClass = 6;
inline constexpr std::size_t kNumFeatures = 20;
inline constexpr std::array<std::size_t, 3> kFeatureWindows{5, 10, 22};
/// Moves smaller than this (in absolute log-return) are labelled 0.
inline constexpr double kLabelDeadZone = 1e-4;

std::string_view to_string(AssetClass c) noexcept;
/// Accepts "equities", "currencies", "commodities", "fixed_income". Throws ParseError.
AssetClass parse_asset_class(std::string_view s);

/// Column names of the 20-slot feature axis, in tensor order:
///   0      log-difference r_t
///   1..3   rolling mean      over 5, 10, 22 days
///   4..6   rolling std       over 5, 10, 22 days
///   7..9   rolling skewness  over 5, 10, 22 days
///   10..12 rolling kurtosis  over 5, 10, 22 days
///   13..15 relative min-max  over 5, 10, 22 days
///   16     relative high-low-close
///   17     high-low spread
///   18     volume
///   19     open interest
const std::array<std::string_view, kNumFeatures>& feature_names() noexcept;

struct DailyBar {
    double close = 0.0;
    double high = 0.0;
    double low = 0.0;
    double volume = 0.0;
    double open_interest = 0.0;
};

struct Instrument {
    std::string symbol;
    AssetClass asset_class = AssetClass::Equities;
    std::size_t class_slot = 1;  // 1-based position within its class
    std::vector<std::string> dates;  // ISO-8601, ascending
    std::vector<DailyBar> bars;
};

/// Daily data for 4 asset classes x `components_per_class` instruments.
struct AssetPanel {
    std::size_t components_per_class = kDefaultComponentsPerClass;
    std::vector<Instrument> instruments;

    const Instrument& find(std::string_view symbol) const;  // UnknownTarget
    /// Checks the class/slot layout, bar sanity and date alignment.
    void validate() const;
};

// Scalar feature formulas. Positions that are undefined for lack of history are NaN.

/// r_t = log p_t - log p_{t-1}; r_0 is NaN. Throws NonPositivePrice.
std::vector<double> log_diff(std::span<const double> prices);

struct RollingMoments {
    std::vector<double> mean;
    std::vector<double> stddev;    // population
    std::vector<double> skewness;  // m3 / m2^1.5, 0 for a flat window
    std::vector<double> kurtosis;  // m4 / m2^2,   0 for a flat window
};

/// Trailing-window moments ending at t (inclusive). Throws WindowTooLarge.
RollingMoments rolling_stats(std::span<const double> r, std::size_t window);

/// (p_t - min) / (max - min) over the trailing window; 0.5 when max == min.
std::vector<double> rel_minmax(std::span<const double> prices, std::size_t window);

/// (p - l) / (h - l); 0.5 when h == l.
double rel_hlc(double p, double h, double l) noexcept;
/// (h - l) / l
double hl_spread(double h, double l) noexcept;

/// +1 above the dead zone, -1 below it, 0 inside.
int direction_label(double next_return) noexcept;

/// Raw 20-feature matrix for one instrument: result[t][f]; NaN during warm-up.
std::vector<std::array<double, kNumFeatures>> instrument_features(const Instrument& inst);

struct FeaturePanel {
    std::string target;
    std::size_t components_per_class = kDefaultComponentsPerClass;
    /// Symbol at (slot, class): symbols[slot + components * class].
    std::vector<std::string> symbols;

    std::vector<std::string> dates;
    std::vector<DenseTensor> raw;  // Z_t before normalization, (20, C, 4)
    std::vector<DenseTensor> z;    // normalized Z_t, (20, C, 4)
    std::vector<DenseTensor> x;    // reshape of z: (2, 2, 5, C, 4)
    std::vector<int> labels;       // direction of the target's next-day return
    std::vector<double> next_returns;

    DenseTensor mean;    // (20, C, 4), training split
    DenseTensor stddev;  // (20, C, 4), training split; 0 marks a degenerate feature
    std::size_t train_count = 0;  // dates [0, train_count) are the training split

    std::size_t size() const noexcept { return dates.size(); }
    /// (2, 2, 5, C, 4)
    std::vector<std::size_t> input_dims() const;
};

/// Builds the per-date feature tensors, labels and training-split normalization.
/// Dates start after the longest window warm-up and stop one day before the end so
/// that every date has a next-day label.
FeaturePanel assemble(const AssetPanel& panel, std::string_view target, double split);

struct SampleSet {
    std::vector<Sample> samples;
    std::vector<std::size_t> end_index;  // panel date index of each window's last step
};

/// Stride-1 windows of `seq_len` consecutive x tensors whose last date lies in
/// [begin, end). The samples reference panel storage.
SampleSet make_samples(const FeaturePanel& panel, std::size_t seq_len, std::size_t begin,
                       std::size_t end);
SampleSet train_samples(const FeaturePanel& panel, std::size_t seq_len);
SampleSet test_samples(const FeaturePanel& panel, std::size_t seq_len);

/// Audit dump of raw features: date,symbol,asset_class,class_slot + 20 feature columns.
void write_feature_csv(std::ostream& os, const FeaturePanel& panel);

// Market data files.

struct ManifestEntry {
    std::string symbol;
    AssetClass asset_class = AssetClass::Equities;
    std::size_t class_slot = 1;
    std::string path;
};

/// Header `symbol,asset_class,class_slot,path`; paths are relative to the manifest.
std::vector<ManifestEntry> read_manifest(const std::string& manifest_path);
/// Loads every instrument and aligns them on the intersection of their dates.
AssetPanel load_panel(const std::string& manifest_path);

/// Header `date,close,high,low,volume,open_interest`.
Instrument read_instrument_csv(std::istream& is, std::string symbol);
void write_instrument_csv(std::ostream& os, const Instrument& inst);
/// Writes one CSV per instrument plus manifest.csv into `dir`.
void save_panel(const AssetPanel& panel, const std::string& dir);

// Synthetic data.

struct SynthConfig {
    std::size_t days = 1000;
    std::size_t components_per_class = kDefaultComponentsPerClass;
    std::string start_date = "2006-05-01";
    std::string target = "JPYUSD";
    /// 0: the target is an ordinary random walk; 1: the sign of the target's next-day
    /// return equals the sign of the driver's return today.
    double signal_strength = 0.0;
    std::string signal_driver = "SPX";
    /// Daily log-return volatility of the target.
    double target_vol = 0.006;

    void validate() const;
};

/// Symbols used for the synthetic panel, in slot order, for one class.
std::vector<std::string> synth_symbols(AssetClass c, std::size_t components);

/// Correlated geometric random walks with volume and open interest. Deterministic per
/// seed (drawn from the "synth" stream).
AssetPanel synth_panel(const SynthConfig& config, std::uint64_t seed);

}  // namespace ttrnn
