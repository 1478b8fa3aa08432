#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "ttrnn/error.hpp"
#include "ttrnn/features.hpp"

using namespace ttrnn;

namespace {

template <typename F>
ErrorKind kind_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no ttrnn::Error thrown";
    return ErrorKind::IOFailure;
}

SynthConfig small_synth(std::size_t days, std::size_t components = 3) {
    SynthConfig c;
    c.days = days;
    c.components_per_class = components;
    c.target = "JPYUSD";
    if (components < 6) c.target = synth_symbols(AssetClass::Currencies, components).back();
    return c;
}

bool close_to(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

}  // namespace

TEST(LogDiff, Values) {
    const double p[] = {100.0, 101.0};
    const auto r = log_diff(p);
    EXPECT_TRUE(std::isnan(r[0]));
    EXPECT_NEAR(r[1], 0.00995033, 1e-8);
    const double flat[] = {5, 5, 5, 5};
    for (std::size_t t = 1; t < 4; ++t) EXPECT_EQ(log_diff(flat)[t], 0.0);
    const double bad[] = {1.0, 0.0};
    EXPECT_EQ(kind_of([&] { (void)log_diff(bad); }), ErrorKind::NonPositivePrice);
}

TEST(RollingStats, HandValues) {
    const double r[] = {1, 2, 3, 4, 5};
    const auto m = rolling_stats(r, 5);
    EXPECT_DOUBLE_EQ(m.mean[4], 3.0);
    EXPECT_DOUBLE_EQ(m.stddev[4], std::sqrt(2.0));
    EXPECT_NEAR(m.skewness[4], 0.0, 1e-15);
    // m4 = (16 + 1 + 0 + 1 + 16) / 5 = 6.8, m2 = 2
    EXPECT_DOUBLE_EQ(m.kurtosis[4], 6.8 / 4.0);
    EXPECT_TRUE(std::isnan(m.mean[3]));
}

TEST(RollingStats, FlatWindowRule) {
    const double r[] = {0.2, 0.2, 0.2};
    const auto m = rolling_stats(r, 3);
    EXPECT_DOUBLE_EQ(m.mean[2], 0.2);
    EXPECT_EQ(m.stddev[2], 0.0);
    EXPECT_EQ(m.skewness[2], 0.0);
    EXPECT_EQ(m.kurtosis[2], 0.0);
}

TEST(RollingStats, SymmetricWindowHasZeroSkew) {
    const double r[] = {-3, 1, 0, -1, 3};
    EXPECT_NEAR(rolling_stats(r, 5).skewness[4], 0.0, 1e-15);
}

TEST(RollingStats, WindowTooLarge) {
    const double r[] = {1, 2};
    EXPECT_EQ(kind_of([&] { (void)rolling_stats(r, 3); }), ErrorKind::WindowTooLarge);
    EXPECT_EQ(kind_of([&] { (void)rel_minmax(r, 3); }), ErrorKind::WindowTooLarge);
}

TEST(RelMinMax, Values) {
    const double p[] = {1, 2, 3, 4, 5, 4.5};
    const auto v = rel_minmax(p, 5);
    EXPECT_DOUBLE_EQ(v[4], 1.0);
    EXPECT_NEAR(v[5], 2.5 / 3.0, 1e-15);
    const double down[] = {5, 4, 3};
    EXPECT_EQ(rel_minmax(down, 3)[2], 0.0);
    const double flat[] = {2, 2};
    EXPECT_EQ(rel_minmax(flat, 2)[1], 0.5);
}

TEST(BarFeatures, Values) {
    EXPECT_EQ(rel_hlc(100, 105, 100), 0.0);
    EXPECT_EQ(rel_hlc(105, 105, 100), 1.0);
    EXPECT_DOUBLE_EQ(rel_hlc(103, 105, 100), 0.6);
    EXPECT_DOUBLE_EQ(hl_spread(105, 100), 0.05);
    EXPECT_EQ(rel_hlc(7, 7, 7), 0.5);
    EXPECT_EQ(hl_spread(7, 7), 0.0);
}

TEST(Labels, DeadZone) {
    EXPECT_EQ(direction_label(5e-5), 0);
    EXPECT_EQ(direction_label(-5e-5), 0);
    EXPECT_EQ(direction_label(1e-4), 0);
    EXPECT_EQ(direction_label(2e-4), 1);
    EXPECT_EQ(direction_label(-2e-4), -1);
}

TEST(FeatureNames, TwentySlots) {
    EXPECT_EQ(feature_names().size(), 20u);
    EXPECT_EQ(feature_names()[0], "log_diff");
    EXPECT_EQ(feature_names()[19], "open_interest");
}

TEST(Assemble, EveryEntryMatchesScalarOracle) {
    const SynthConfig sc = small_synth(120, 3);
    const AssetPanel panel = synth_panel(sc, 3);
    const FeaturePanel fp = assemble(panel, sc.target, 0.8);
    ASSERT_EQ(fp.size(), 120u - 22u - 1u);
    EXPECT_EQ(fp.input_dims(), (std::vector<std::size_t>{2, 2, 5, 3, 4}));
    for (const auto& inst : panel.instruments) {
        const std::size_t slot = inst.class_slot - 1;
        const auto cls = static_cast<std::size_t>(inst.asset_class);
        for (std::size_t k = 0; k < fp.size(); ++k) {
            const auto want = oracle::raw_features(inst, 22 + k);
            for (std::size_t f = 0; f < kNumFeatures; ++f) {
                ASSERT_TRUE(close_to(fp.raw[k].at({f, slot, cls}), want[f], 1e-12))
                    << inst.symbol << " day " << k << " feature " << feature_names()[f];
            }
        }
    }
}

TEST(Assemble, LabelsAndReturnsLookOneDayAhead) {
    const AssetPanel panel = synth_panel(small_synth(80, 2), 4);
    const std::string target = panel.instruments[2].symbol;
    const FeaturePanel fp = assemble(panel, target, 0.5);
    const auto& bars = panel.find(target).bars;
    for (std::size_t k = 0; k < fp.size(); ++k) {
        const double next = std::log(bars[23 + k].close / bars[22 + k].close);
        EXPECT_NEAR(fp.next_returns[k], next, 1e-14);
        EXPECT_EQ(fp.labels[k], direction_label(fp.next_returns[k]));
    }
}

TEST(Assemble, NoLookAhead) {
    const AssetPanel full = synth_panel(small_synth(150, 2), 5);
    AssetPanel cut = full;
    for (auto& inst : cut.instruments) {
        inst.bars.resize(100);
        inst.dates.resize(100);
    }
    const std::string target = full.instruments[2].symbol;
    const FeaturePanel a = assemble(full, target, 0.5);
    const FeaturePanel b = assemble(cut, target, 0.5);
    ASSERT_EQ(b.size(), 100u - 23u);
    for (std::size_t k = 0; k < b.size(); ++k) {
        EXPECT_EQ(a.raw[k], b.raw[k]);
        EXPECT_EQ(a.labels[k], b.labels[k]);
    }
}

TEST(Assemble, NormalizationUsesTrainingDatesOnly) {
    const AssetPanel panel = synth_panel(small_synth(100, 2), 6);
    const std::string target = panel.instruments[2].symbol;
    const FeaturePanel fp = assemble(panel, target, 0.6);
    EXPECT_EQ(fp.train_count, static_cast<std::size_t>(std::floor(0.6 * fp.size())));
    const std::size_t e = 0;  // log_diff of the first equity
    double mean = 0.0;
    for (std::size_t k = 0; k < fp.train_count; ++k) mean += fp.raw[k][e];
    mean /= static_cast<double>(fp.train_count);
    double var = 0.0;
    for (std::size_t k = 0; k < fp.train_count; ++k) var += std::pow(fp.raw[k][e] - mean, 2);
    const double sd = std::sqrt(var / static_cast<double>(fp.train_count));
    EXPECT_NEAR(fp.mean[e], mean, 1e-15);
    EXPECT_NEAR(fp.stddev[e], sd, 1e-15);
    for (std::size_t k = 0; k < fp.size(); ++k) EXPECT_NEAR(fp.z[k][e], (fp.raw[k][e] - mean) / sd, 1e-12);

    // Currencies carry no volume: constant over training -> all zeros.
    const std::size_t vol = 18 + kNumFeatures * (0 + 2 * 1);
    EXPECT_EQ(fp.stddev[vol], 0.0);
    for (const auto& z : fp.z) EXPECT_EQ(z[vol], 0.0);
    for (std::size_t k = 0; k < fp.size(); ++k) EXPECT_EQ(fp.x[k].data()[5], fp.z[k][5]);
}

TEST(Assemble, Errors) {
    const AssetPanel panel = synth_panel(small_synth(60, 1), 7);
    EXPECT_EQ(kind_of([&] { (void)assemble(panel, "NOPE", 0.5); }), ErrorKind::UnknownTarget);
    EXPECT_EQ(kind_of([&] { (void)assemble(panel, "SPX", 1.0); }), ErrorKind::InvalidConfig);
    AssetPanel short_panel = panel;
    for (auto& inst : short_panel.instruments) {
        inst.bars.resize(23);
        inst.dates.resize(23);
    }
    EXPECT_EQ(kind_of([&] { (void)assemble(short_panel, "SPX", 0.5); }), ErrorKind::InsufficientHistory);
    AssetPanel bad = panel;
    bad.instruments[1].bars[10].close = -1.0;
    EXPECT_EQ(kind_of([&] { (void)assemble(bad, "SPX", 0.5); }), ErrorKind::NonPositivePrice);
    bad = panel;
    std::swap(bad.instruments[1].bars[10].high, bad.instruments[1].bars[10].low);
    EXPECT_EQ(kind_of([&] { (void)assemble(bad, "SPX", 0.5); }), ErrorKind::InvalidBar);
    bad = panel;
    bad.instruments[3].dates[5] = "1999-01-01";
    EXPECT_EQ(kind_of([&] { (void)assemble(bad, "SPX", 0.5); }), ErrorKind::MisalignedDates);
}

TEST(Samples, WindowsAndSplit) {
    const AssetPanel panel = synth_panel(small_synth(100, 1), 8);
    const FeaturePanel fp = assemble(panel, "SPX", 0.7);
    const SampleSet tr = train_samples(fp, 5);
    const SampleSet te = test_samples(fp, 5);
    EXPECT_EQ(tr.samples.size(), fp.train_count - 4);
    EXPECT_EQ(te.samples.size(), fp.size() - fp.train_count);
    EXPECT_EQ(tr.end_index.front(), 4u);
    EXPECT_EQ(te.end_index.front(), fp.train_count);
    const auto& s = te.samples.front();
    EXPECT_EQ(s.steps.size(), 5u);
    EXPECT_EQ(&s.steps.back(), &fp.x[fp.train_count]);
    EXPECT_EQ(s.label, fp.labels[fp.train_count]);
}

TEST(Synth, DeterministicPerSeed) {
    const SynthConfig cfg = small_synth(60);
    const AssetPanel a = synth_panel(cfg, 11);
    const AssetPanel b = synth_panel(cfg, 11);
    const AssetPanel c = synth_panel(cfg, 12);
    ASSERT_EQ(a.instruments.size(), 12u);
    for (std::size_t i = 0; i < a.instruments.size(); ++i) {
        EXPECT_EQ(a.instruments[i].dates, b.instruments[i].dates);
        for (std::size_t t = 0; t < 60; ++t) EXPECT_EQ(a.instruments[i].bars[t].close, b.instruments[i].bars[t].close);
    }
    EXPECT_NE(a.instruments[0].bars[30].close, c.instruments[0].bars[30].close);
}

TEST(Synth, DefaultPanelLayout) {
    const AssetPanel panel = synth_panel(SynthConfig{}, 0);
    EXPECT_EQ(panel.instruments.size(), 24u);
    std::array<int, 4> per_class{};
    for (const auto& inst : panel.instruments) ++per_class[static_cast<std::size_t>(inst.asset_class)];
    for (int n : per_class) EXPECT_EQ(n, 6);
    EXPECT_NO_THROW(panel.find("JPYUSD"));
    EXPECT_EQ(panel.instruments.front().dates.front(), "2006-05-01");
}

TEST(Synth, NoSignalLabelsNearPriors) {
    // Gaussian returns with vol 0.006: P(|r| <= 1e-4) = 2 Phi(1/60) - 1.
    SynthConfig cfg;
    cfg.days = 4000;
    const AssetPanel panel = synth_panel(cfg, 13);
    const FeaturePanel fp = assemble(panel, "JPYUSD", 0.5);
    const double n = static_cast<double>(fp.size());
    const double p0 = std::erf((1e-4 / 0.006) / std::sqrt(2.0));
    const double p_up = (1.0 - p0) / 2.0;
    double up = 0, flat = 0;
    for (int l : fp.labels) {
        up += l == 1;
        flat += l == 0;
    }
    EXPECT_NEAR(up / n, p_up, 3.0 * std::sqrt(p_up * (1 - p_up) / n));
    EXPECT_NEAR(flat / n, p0, 3.0 * std::sqrt(p0 * (1 - p0) / n));
}

TEST(Synth, FullSignalIsRecoverableFromDriverFeature) {
    SynthConfig cfg;
    cfg.days = 500;
    cfg.signal_strength = 1.0;
    const AssetPanel panel = synth_panel(cfg, 14);
    const FeaturePanel fp = assemble(panel, "JPYUSD", 0.5);
    // Generating rule: next-day direction follows today's driver return.
    const std::size_t driver = 0 + kNumFeatures * (0 + 6 * 0);
    double hits = 0;
    for (std::size_t k = 0; k < fp.size(); ++k) hits += (fp.raw[k][driver] >= 0 ? 1 : -1) == fp.labels[k];
    EXPECT_GT(hits / static_cast<double>(fp.size()), 0.9);
}

TEST(Synth, InvalidConfig) {
    SynthConfig cfg;
    cfg.signal_strength = 1.5;
    EXPECT_EQ(kind_of([&] { (void)synth_panel(cfg, 0); }), ErrorKind::InvalidConfig);
    cfg = SynthConfig{};
    cfg.target = "XYZ";
    EXPECT_EQ(kind_of([&] { (void)synth_panel(cfg, 0); }), ErrorKind::UnknownTarget);
}

TEST(MarketData, PanelRoundTripThroughFiles) {
    const AssetPanel panel = synth_panel(small_synth(40, 2), 15);
    const auto dir = oracle::temp_dir("panel_roundtrip");
    save_panel(panel, dir.string());
    const AssetPanel back = load_panel((dir / "manifest.csv").string());
    ASSERT_EQ(back.instruments.size(), panel.instruments.size());
    EXPECT_EQ(back.components_per_class, 2u);
    for (const auto& inst : panel.instruments) {
        const Instrument& b = back.find(inst.symbol);
        EXPECT_EQ(b.asset_class, inst.asset_class);
        EXPECT_EQ(b.class_slot, inst.class_slot);
        EXPECT_EQ(b.dates, inst.dates);
        for (std::size_t t = 0; t < inst.bars.size(); ++t) {
            EXPECT_EQ(b.bars[t].close, inst.bars[t].close);
            EXPECT_EQ(b.bars[t].open_interest, inst.bars[t].open_interest);
        }
    }
}

TEST(MarketData, LoadAlignsOnCommonDates) {
    const AssetPanel panel = synth_panel(small_synth(40, 1), 16);
    AssetPanel ragged = panel;
    auto& first = ragged.instruments[0];
    first.dates.erase(first.dates.begin() + 3);
    first.bars.erase(first.bars.begin() + 3);
    const auto dir = oracle::temp_dir("panel_align");
    save_panel(ragged, dir.string());
    const AssetPanel back = load_panel((dir / "manifest.csv").string());
    for (const auto& inst : back.instruments) EXPECT_EQ(inst.dates.size(), 39u);
    EXPECT_NO_THROW(back.validate());
}

TEST(MarketData, ParseErrors) {
    std::stringstream bad_header("when,close\n2020-01-01,1\n");
    EXPECT_EQ(kind_of([&] { (void)read_instrument_csv(bad_header, "X"); }), ErrorKind::ParseError);
    std::stringstream bad_number(
        "date,close,high,low,volume,open_interest\n2020-01-01,abc,1,1,0,0\n");
    EXPECT_EQ(kind_of([&] { (void)read_instrument_csv(bad_number, "X"); }), ErrorKind::ParseError);
    std::stringstream unordered(
        "date,close,high,low,volume,open_interest\n2020-01-02,1,1,1,0,0\n2020-01-01,1,1,1,0,0\n");
    EXPECT_EQ(kind_of([&] { (void)read_instrument_csv(unordered, "X"); }), ErrorKind::MisalignedDates);
    EXPECT_EQ(kind_of([] { (void)load_panel("/nonexistent/manifest.csv"); }), ErrorKind::IOFailure);
}

TEST(MarketData, FeatureCsvHasOneRowPerInstrumentDay) {
    const AssetPanel panel = synth_panel(small_synth(40, 1), 17);
    const FeaturePanel fp = assemble(panel, "SPX", 0.5);
    std::stringstream ss;
    write_feature_csv(ss, fp);
    std::string line;
    std::getline(ss, line);
    EXPECT_EQ(line.rfind("date,symbol,asset_class,class_slot,log_diff,", 0), 0u);
    std::size_t rows = 0;
    while (std::getline(ss, line)) ++rows;
    EXPECT_EQ(rows, fp.size() * 4);
}
