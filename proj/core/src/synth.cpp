#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "ttrnn/error.hpp"
#include "ttrnn/features.hpp"
#include "ttrnn/random.hpp"
#include "ttrnn/text.hpp"

namespace ttrnn {

namespace {

const std::array<std::array<const char*, 6>, kNumAssetClasses> kTableSymbols{{
    {"SPX", "MXCA", "UKX", "FTSEMIB", "SHSZ300", "NKY"},
    {"CHFUSD", "CADUSD", "GBPUSD", "EURUSD", "CNYUSD", "JPYUSD"},
    {"GC1", "HG1", "CL1", "NG1", "S1", "C1"},
    {"USGG10YR", "GCAN10YR", "GUKG10", "GBTPGR10", "GCNY10YR", "GJGB10"},
}};

constexpr std::array<double, kNumAssetClasses> kClassVol{0.012, 0.006, 0.018, 0.015};

// Loadings on the common factor and the class factor; the rest is idiosyncratic.
constexpr double kCommonLoading = 0.3;
constexpr double kClassLoading = 0.5;

double base_price(AssetClass c, std::size_t slot) {
    const double s = static_cast<double>(slot);
    switch (c) {
        case AssetClass::Equities: return 1000.0 + 200.0 * s;
        case AssetClass::Currencies: return 0.5 + 0.2 * s;
        case AssetClass::Commodities: return 20.0 + 15.0 * s;
        case AssetClass::FixedIncome: return 2.0 + 0.5 * s;
    }
    return 1.0;
}

std::vector<std::string> business_days(const std::string& start, std::size_t count) {
    using namespace std::chrono;
    if (start.size() != 10 || start[4] != '-' || start[7] != '-') {
        throw Error(ErrorKind::InvalidConfig, "start_date must be YYYY-MM-DD");
    }
    const int y = static_cast<int>(text::parse_size(std::string_view(start).substr(0, 4)));
    const unsigned m = static_cast<unsigned>(text::parse_size(std::string_view(start).substr(5, 2)));
    const unsigned d = static_cast<unsigned>(text::parse_size(std::string_view(start).substr(8, 2)));
    const year_month_day ymd{year{y}, month{m}, day{d}};
    if (!ymd.ok()) throw Error(ErrorKind::InvalidConfig, "invalid start_date " + start);

    std::vector<std::string> out;
    out.reserve(count);
    sys_days day_it{ymd};
    while (out.size() < count) {
        const weekday wd{day_it};
        if (wd != Saturday && wd != Sunday) {
            const year_month_day cur{day_it};
            char buf[16];
            std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(cur.year()),
                          static_cast<unsigned>(cur.month()), static_cast<unsigned>(cur.day()));
            out.emplace_back(buf);
        }
        day_it += days{1};
    }
    return out;
}

}  // namespace

std::vector<std::string> synth_symbols(AssetClass c, std::size_t components) {
    std::vector<std::string> out;
    const auto& table = kTableSymbols[static_cast<std::size_t>(c)];
    for (std::size_t k = 0; k < components; ++k) {
        if (k < table.size()) {
            out.emplace_back(table[k]);
        } else {
            out.push_back(std::string(to_string(c)) + "_" + std::to_string(k + 1));
        }
    }
    return out;
}

void SynthConfig::validate() const {
    if (days < 24) throw Error(ErrorKind::InvalidConfig, "synthetic panel needs at least 24 days");
    if (components_per_class == 0) {
        throw Error(ErrorKind::InvalidConfig, "components_per_class must be positive");
    }
    if (!(signal_strength >= 0.0 && signal_strength <= 1.0)) {
        throw Error(ErrorKind::InvalidConfig, "signal_strength must lie in [0, 1]");
    }
    if (!(target_vol > 0.0)) throw Error(ErrorKind::InvalidConfig, "target_vol must be positive");
    if (signal_strength > 0.0 && signal_driver == target) {
        throw Error(ErrorKind::InvalidConfig, "signal driver must differ from the target");
    }
}

AssetPanel synth_panel(const SynthConfig& config, std::uint64_t seed) {
    config.validate();
    const std::size_t c = config.components_per_class;
    const std::size_t n = kNumAssetClasses * c;

    AssetPanel panel;
    panel.components_per_class = c;
    const auto dates = business_days(config.start_date, config.days);
    std::vector<double> vol(n);
    std::size_t target = n, driver = n;
    for (std::size_t cls = 0; cls < kNumAssetClasses; ++cls) {
        const auto ac = static_cast<AssetClass>(cls);
        const auto symbols = synth_symbols(ac, c);
        for (std::size_t slot = 0; slot < c; ++slot) {
            Instrument inst;
            inst.symbol = symbols[slot];
            inst.asset_class = ac;
            inst.class_slot = slot + 1;
            inst.dates = dates;
            inst.bars.resize(config.days);
            const std::size_t i = panel.instruments.size();
            vol[i] = kClassVol[cls];
            if (inst.symbol == config.target) {
                target = i;
                vol[i] = config.target_vol;
            }
            if (inst.symbol == config.signal_driver) driver = i;
            panel.instruments.push_back(std::move(inst));
        }
    }
    if (target == n) throw Error(ErrorKind::UnknownTarget, "target " + config.target + " not in panel");
    if (config.signal_strength > 0.0 && driver == n) {
        throw Error(ErrorKind::InvalidConfig, "signal driver " + config.signal_driver + " not in panel");
    }

    Rng rng = make_stream(seed, "synth");
    std::normal_distribution<double> normal(0.0, 1.0);
    const double idio = std::sqrt(1.0 - kCommonLoading * kCommonLoading - kClassLoading * kClassLoading);
    const double s = config.signal_strength;
    const double noise_weight = std::sqrt(1.0 - s * s);

    std::vector<double> log_price(n), open_interest(n, 0.0), prev_r(n, 0.0), r(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& inst = panel.instruments[i];
        log_price[i] = std::log(base_price(inst.asset_class, inst.class_slot));
        if (inst.asset_class == AssetClass::Commodities) open_interest[i] = 2.0e5;
    }

    for (std::size_t t = 0; t < config.days; ++t) {
        // Every day consumes the same number of draws in the same order.
        const double common = normal(rng);
        std::array<double, kNumAssetClasses> class_factor{};
        for (double& g : class_factor) g = normal(rng);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& inst = panel.instruments[i];
            const double e = normal(rng);
            const double signal_mag = std::abs(normal(rng));
            const double hi = std::abs(normal(rng));
            const double lo = std::abs(normal(rng));
            const double v = normal(rng);
            const double oi = normal(rng);

            const double base = vol[i] * (kCommonLoading * common +
                                          kClassLoading * class_factor[static_cast<std::size_t>(inst.asset_class)] +
                                          idio * e);
            double ri = t == 0 ? 0.0 : base;
            if (i == target && s > 0.0 && t >= 2) {
                const double dir = prev_r[driver] >= 0.0 ? 1.0 : -1.0;
                ri = s * dir * (vol[i] * signal_mag + 2.0 * kLabelDeadZone) + noise_weight * base;
            }
            r[i] = ri;
            log_price[i] += ri;

            auto& bar = panel.instruments[i].bars[t];
            bar.close = std::exp(log_price[i]);
            bar.high = bar.close * std::exp(0.5 * vol[i] * hi);
            bar.low = bar.close * std::exp(-0.5 * vol[i] * lo);
            const bool traded = inst.asset_class == AssetClass::Equities ||
                                inst.asset_class == AssetClass::Commodities;
            bar.volume = traded ? 1.0e6 * static_cast<double>(inst.class_slot) * std::exp(0.25 * v) : 0.0;
            if (inst.asset_class == AssetClass::Commodities) {
                open_interest[i] *= std::exp(0.02 * oi);
                bar.open_interest = open_interest[i];
            }
        }
        prev_r = r;
    }
    return panel;
}

}  // namespace ttrnn
