#include "ttrnn/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "ttrnn/error.hpp"
#include "ttrnn/text.hpp"

namespace ttrnn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr std::array<std::string_view, kNumFeatures> kFeatureNames{
    "log_diff",   "mean_5",     "mean_10",     "mean_22",     "std_5",
    "std_10",     "std_22",     "skew_5",      "skew_10",     "skew_22",
    "kurt_5",     "kurt_10",    "kurt_22",     "minmax_5",    "minmax_10",
    "minmax_22",  "rel_hlc",    "hl_spread",   "volume",      "open_interest"};

constexpr std::size_t kWarmup = 22;

}  // namespace

std::string_view to_string(AssetClass c) noexcept {
    switch (c) {
        case AssetClass::Equities: return "equities";
        case AssetClass::Currencies: return "currencies";
        case AssetClass::Commodities: return "commodities";
        case AssetClass::FixedIncome: return "fixed_income";
    }
    return "unknown";
}

AssetClass parse_asset_class(std::string_view s) {
    s = text::trim(s);
    if (s == "equities") return AssetClass::Equities;
    if (s == "currencies") return AssetClass::Currencies;
    if (s == "commodities") return AssetClass::Commodities;
    if (s == "fixed_income") return AssetClass::FixedIncome;
    throw Error(ErrorKind::ParseError, "unknown asset class '" + std::string(s) + "'");
}

const std::array<std::string_view, kNumFeatures>& feature_names() noexcept { return kFeatureNames; }

const Instrument& AssetPanel::find(std::string_view symbol) const {
    for (const auto& inst : instruments) {
        if (inst.symbol == symbol) return inst;
    }
    throw Error(ErrorKind::UnknownTarget, "no instrument named '" + std::string(symbol) + "'");
}

void AssetPanel::validate() const {
    const std::size_t c = components_per_class;
    if (c == 0 || instruments.size() != kNumAssetClasses * c) {
        throw Error(ErrorKind::InvalidConfig,
                    "panel needs " + std::to_string(kNumAssetClasses) + " x " + std::to_string(c) +
                        " instruments, has " + std::to_string(instruments.size()));
    }
    std::vector<bool> taken(kNumAssetClasses * c, false);
    for (const auto& inst : instruments) {
        if (inst.class_slot < 1 || inst.class_slot > c) {
            throw Error(ErrorKind::InvalidConfig, inst.symbol + ": class slot out of range");
        }
        const std::size_t cell = (inst.class_slot - 1) + c * static_cast<std::size_t>(inst.asset_class);
        if (taken[cell]) {
            throw Error(ErrorKind::InvalidConfig, inst.symbol + ": duplicate class slot");
        }
        taken[cell] = true;
        if (inst.dates.size() != inst.bars.size()) {
            throw Error(ErrorKind::MisalignedDates, inst.symbol + ": dates and bars differ in length");
        }
        if (inst.dates != instruments.front().dates) {
            throw Error(ErrorKind::MisalignedDates,
                        inst.symbol + " is not aligned with " + instruments.front().symbol);
        }
        for (std::size_t t = 0; t < inst.bars.size(); ++t) {
            const auto& b = inst.bars[t];
            if (!(b.close > 0.0) || !(b.low > 0.0) || !(b.high > 0.0)) {
                throw Error(ErrorKind::NonPositivePrice, inst.symbol + " on " + inst.dates[t]);
            }
            if (b.high < b.low) {
                throw Error(ErrorKind::InvalidBar, inst.symbol + " on " + inst.dates[t] + ": high < low");
            }
        }
    }
}

std::vector<double> log_diff(std::span<const double> prices) {
    std::vector<double> r(prices.size(), kNaN);
    for (std::size_t t = 0; t < prices.size(); ++t) {
        if (!(prices[t] > 0.0)) {
            throw Error(ErrorKind::NonPositivePrice, "price at position " + std::to_string(t) +
                                                         " is not positive");
        }
        if (t > 0) r[t] = std::log(prices[t]) - std::log(prices[t - 1]);
    }
    return r;
}

RollingMoments rolling_stats(std::span<const double> r, std::size_t window) {
    if (window == 0 || window > r.size()) {
        throw Error(ErrorKind::WindowTooLarge, "window " + std::to_string(window) +
                                                   " for a series of length " +
                                                   std::to_string(r.size()));
    }
    const std::size_t n = r.size();
    RollingMoments out{std::vector<double>(n, kNaN), std::vector<double>(n, kNaN),
                       std::vector<double>(n, kNaN), std::vector<double>(n, kNaN)};
    const double w = static_cast<double>(window);
    for (std::size_t t = window - 1; t < n; ++t) {
        const auto win = r.subspan(t + 1 - window, window);
        double sum = 0.0;
        for (double v : win) sum += v;
        const double mean = sum / w;
        out.mean[t] = mean;
        if (std::isnan(mean)) continue;

        const auto [lo, hi] = std::minmax_element(win.begin(), win.end());
        if (*lo == *hi) {
            out.stddev[t] = 0.0;
            out.skewness[t] = 0.0;
            out.kurtosis[t] = 0.0;
            continue;
        }
        double m2 = 0.0, m3 = 0.0, m4 = 0.0;
        for (double v : win) {
            const double d = v - mean;
            const double d2 = d * d;
            m2 += d2;
            m3 += d2 * d;
            m4 += d2 * d2;
        }
        m2 /= w;
        m3 /= w;
        m4 /= w;
        out.stddev[t] = std::sqrt(m2);
        out.skewness[t] = m3 / std::pow(m2, 1.5);
        out.kurtosis[t] = m4 / (m2 * m2);
    }
    return out;
}

std::vector<double> rel_minmax(std::span<const double> prices, std::size_t window) {
    if (window == 0 || window > prices.size()) {
        throw Error(ErrorKind::WindowTooLarge, "window " + std::to_string(window) +
                                                   " for a series of length " +
                                                   std::to_string(prices.size()));
    }
    std::vector<double> out(prices.size(), kNaN);
    for (std::size_t t = window - 1; t < prices.size(); ++t) {
        const auto win = prices.subspan(t + 1 - window, window);
        const auto [lo, hi] = std::minmax_element(win.begin(), win.end());
        out[t] = (*hi == *lo) ? 0.5 : (prices[t] - *lo) / (*hi - *lo);
    }
    return out;
}

double rel_hlc(double p, double h, double l) noexcept {
    if (h == l) return 0.5;
    return (p - l) / (h - l);
}

double hl_spread(double h, double l) noexcept { return (h - l) / l; }

int direction_label(double next_return) noexcept {
    if (next_return > kLabelDeadZone) return +1;
    if (next_return < -kLabelDeadZone) return -1;
    return 0;
}

std::vector<std::array<double, kNumFeatures>> instrument_features(const Instrument& inst) {
    const std::size_t n = inst.bars.size();
    std::vector<double> close(n);
    for (std::size_t t = 0; t < n; ++t) close[t] = inst.bars[t].close;
    const auto r = log_diff(close);

    std::vector<std::array<double, kNumFeatures>> out(n);
    for (auto& row : out) row.fill(kNaN);
    for (std::size_t t = 0; t < n; ++t) out[t][0] = r[t];

    for (std::size_t w = 0; w < kFeatureWindows.size(); ++w) {
        const std::size_t window = kFeatureWindows[w];
        if (window > n) continue;
        const auto m = rolling_stats(r, window);
        const auto mm = rel_minmax(close, window);
        for (std::size_t t = 0; t < n; ++t) {
            out[t][1 + w] = m.mean[t];
            out[t][4 + w] = m.stddev[t];
            out[t][7 + w] = m.skewness[t];
            out[t][10 + w] = m.kurtosis[t];
            out[t][13 + w] = mm[t];
        }
    }
    for (std::size_t t = 0; t < n; ++t) {
        const auto& b = inst.bars[t];
        out[t][16] = rel_hlc(b.close, b.high, b.low);
        out[t][17] = hl_spread(b.high, b.low);
        out[t][18] = b.volume;
        out[t][19] = b.open_interest;
    }
    return out;
}

std::vector<std::size_t> FeaturePanel::input_dims() const {
    return {2, 2, 5, components_per_class, kNumAssetClasses};
}

FeaturePanel assemble(const AssetPanel& panel, std::string_view target, double split) {
    if (!(split > 0.0 && split < 1.0)) {
        throw Error(ErrorKind::InvalidConfig, "split must lie in (0, 1)");
    }
    panel.validate();
    const Instrument& tgt = panel.find(target);

    const std::size_t c = panel.components_per_class;
    const std::size_t n_days = tgt.bars.size();
    if (n_days < kWarmup + 2) {
        throw Error(ErrorKind::InsufficientHistory,
                    std::to_string(n_days) + " days; need at least " + std::to_string(kWarmup + 2));
    }

    FeaturePanel fp;
    fp.target = std::string(target);
    fp.components_per_class = c;
    fp.symbols.resize(kNumAssetClasses * c);

    // Dates kWarmup .. n_days-2 carry full features and a next-day label.
    const std::size_t first = kWarmup;
    const std::size_t n = n_days - 1 - first;
    const Shape z_shape{kNumFeatures, c, kNumAssetClasses};
    fp.raw.assign(n, DenseTensor(z_shape));
    for (std::size_t k = 0; k < n; ++k) fp.dates.push_back(tgt.dates[first + k]);

    for (const auto& inst : panel.instruments) {
        const std::size_t slot = inst.class_slot - 1;
        const std::size_t cls = static_cast<std::size_t>(inst.asset_class);
        fp.symbols[slot + c * cls] = inst.symbol;
        const auto feats = instrument_features(inst);
        for (std::size_t k = 0; k < n; ++k) {
            const auto& row = feats[first + k];
            DenseTensor& zt = fp.raw[k];
            for (std::size_t f = 0; f < kNumFeatures; ++f) {
                if (std::isnan(row[f])) {
                    throw Error(ErrorKind::InsufficientHistory,
                                inst.symbol + ": undefined feature after warm-up");
                }
                zt[f + kNumFeatures * (slot + c * cls)] = row[f];
            }
        }
    }

    const auto r_target = [&] {
        std::vector<double> close(n_days);
        for (std::size_t t = 0; t < n_days; ++t) close[t] = tgt.bars[t].close;
        return log_diff(close);
    }();
    for (std::size_t k = 0; k < n; ++k) {
        const double next = r_target[first + k + 1];
        fp.next_returns.push_back(next);
        fp.labels.push_back(direction_label(next));
    }

    fp.train_count = static_cast<std::size_t>(std::floor(split * static_cast<double>(n)));
    if (fp.train_count == 0 || fp.train_count >= n) {
        throw Error(ErrorKind::InsufficientHistory,
                    "split leaves an empty training or test period (" + std::to_string(n) +
                        " usable dates)");
    }

    // Per-entry z-score using training dates only.
    const std::size_t cells = z_shape.count();
    fp.mean = DenseTensor(z_shape);
    fp.stddev = DenseTensor(z_shape);
    const double nt = static_cast<double>(fp.train_count);
    for (std::size_t e = 0; e < cells; ++e) {
        double sum = 0.0;
        double lo = fp.raw[0][e], hi = fp.raw[0][e];
        for (std::size_t k = 0; k < fp.train_count; ++k) {
            const double v = fp.raw[k][e];
            sum += v;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const double mean = sum / nt;
        double var = 0.0;
        for (std::size_t k = 0; k < fp.train_count; ++k) {
            const double d = fp.raw[k][e] - mean;
            var += d * d;
        }
        fp.mean[e] = mean;
        fp.stddev[e] = (lo == hi) ? 0.0 : std::sqrt(var / nt);
    }

    const Shape x_shape(fp.input_dims());
    fp.z.reserve(n);
    fp.x.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        DenseTensor zt(z_shape);
        for (std::size_t e = 0; e < cells; ++e) {
            const double sd = fp.stddev[e];
            zt[e] = sd == 0.0 ? 0.0 : (fp.raw[k][e] - fp.mean[e]) / sd;
        }
        fp.x.push_back(reshape(zt, x_shape));
        fp.z.push_back(std::move(zt));
    }
    return fp;
}

SampleSet make_samples(const FeaturePanel& panel, std::size_t seq_len, std::size_t begin,
                       std::size_t end) {
    if (seq_len == 0) throw Error(ErrorKind::InvalidConfig, "seq_len must be positive");
    SampleSet set;
    end = std::min(end, panel.size());
    for (std::size_t t = std::max(begin, seq_len - 1); t < end; ++t) {
        const std::span<const DenseTensor> window(panel.x.data() + (t + 1 - seq_len), seq_len);
        set.samples.push_back(Sample{window, panel.labels[t]});
        set.end_index.push_back(t);
    }
    return set;
}

SampleSet train_samples(const FeaturePanel& panel, std::size_t seq_len) {
    return make_samples(panel, seq_len, 0, panel.train_count);
}

SampleSet test_samples(const FeaturePanel& panel, std::size_t seq_len) {
    return make_samples(panel, seq_len, panel.train_count, panel.size());
}

void write_feature_csv(std::ostream& os, const FeaturePanel& panel) {
    os << "date,symbol,asset_class,class_slot";
    for (auto name : feature_names()) os << ',' << name;
    os << '\n';
    const std::size_t c = panel.components_per_class;
    for (std::size_t k = 0; k < panel.size(); ++k) {
        for (std::size_t cls = 0; cls < kNumAssetClasses; ++cls) {
            for (std::size_t slot = 0; slot < c; ++slot) {
                os << panel.dates[k] << ',' << panel.symbols[slot + c * cls] << ','
                   << to_string(static_cast<AssetClass>(cls)) << ',' << slot + 1;
                for (std::size_t f = 0; f < kNumFeatures; ++f) {
                    os << ',' << text::format_double(panel.raw[k][f + kNumFeatures * (slot + c * cls)]);
                }
                os << '\n';
            }
        }
    }
}

}  // namespace ttrnn
