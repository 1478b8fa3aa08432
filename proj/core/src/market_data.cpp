#include <algorithm>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>

#include "ttrnn/error.hpp"
#include "ttrnn/features.hpp"
#include "ttrnn/text.hpp"

namespace fs = std::filesystem;

namespace ttrnn {

namespace {

constexpr std::string_view kInstrumentHeader = "date,close,high,low,volume,open_interest";
constexpr std::string_view kManifestHeader = "symbol,asset_class,class_slot,path";

bool is_iso_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9}) {
        if (s[i] < '0' || s[i] > '9') return false;
    }
    return true;
}

std::ifstream open_in(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    if (!is) throw Error(ErrorKind::IOFailure, "cannot read " + p.string());
    return is;
}

}  // namespace

Instrument read_instrument_csv(std::istream& is, std::string symbol) {
    Instrument inst;
    inst.symbol = std::move(symbol);
    std::string line;
    if (!std::getline(is, line) || text::trim(line) != kInstrumentHeader) {
        throw Error(ErrorKind::ParseError,
                    inst.symbol + ": expected header '" + std::string(kInstrumentHeader) + "'");
    }
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        const auto f = text::split(text::trim(line), ',');
        if (f.size() != 6) {
            throw Error(ErrorKind::ParseError,
                        inst.symbol + " line " + std::to_string(lineno) + ": expected 6 fields");
        }
        const auto date = text::trim(f[0]);
        if (!is_iso_date(date)) {
            throw Error(ErrorKind::ParseError, inst.symbol + " line " + std::to_string(lineno) +
                                                   ": bad date '" + std::string(date) + "'");
        }
        if (!inst.dates.empty() && !(inst.dates.back() < date)) {
            throw Error(ErrorKind::MisalignedDates,
                        inst.symbol + ": dates must be strictly ascending at " + std::string(date));
        }
        inst.dates.emplace_back(date);
        inst.bars.push_back(DailyBar{text::parse_double(f[1]), text::parse_double(f[2]),
                                     text::parse_double(f[3]), text::parse_double(f[4]),
                                     text::parse_double(f[5])});
    }
    return inst;
}

void write_instrument_csv(std::ostream& os, const Instrument& inst) {
    os << kInstrumentHeader << '\n';
    for (std::size_t t = 0; t < inst.bars.size(); ++t) {
        const auto& b = inst.bars[t];
        os << inst.dates[t] << ',' << text::format_double(b.close) << ','
           << text::format_double(b.high) << ',' << text::format_double(b.low) << ','
           << text::format_double(b.volume) << ',' << text::format_double(b.open_interest) << '\n';
    }
}

std::vector<ManifestEntry> read_manifest(const std::string& manifest_path) {
    auto is = open_in(manifest_path);
    std::string line;
    if (!std::getline(is, line) || text::trim(line) != kManifestHeader) {
        throw Error(ErrorKind::ParseError,
                    "manifest: expected header '" + std::string(kManifestHeader) + "'");
    }
    std::vector<ManifestEntry> entries;
    while (std::getline(is, line)) {
        if (text::trim(line).empty()) continue;
        const auto f = text::split(text::trim(line), ',');
        if (f.size() != 4) throw Error(ErrorKind::ParseError, "manifest: bad row '" + line + "'");
        entries.push_back(ManifestEntry{std::string(text::trim(f[0])), parse_asset_class(f[1]),
                                        text::parse_size(f[2]), std::string(text::trim(f[3]))});
    }
    return entries;
}

AssetPanel load_panel(const std::string& manifest_path) {
    const auto entries = read_manifest(manifest_path);
    if (entries.empty() || entries.size() % kNumAssetClasses != 0) {
        throw Error(ErrorKind::InvalidConfig,
                    "manifest must list 4 classes with the same number of instruments each");
    }
    const fs::path base = fs::path(manifest_path).parent_path();
    AssetPanel panel;
    panel.components_per_class = entries.size() / kNumAssetClasses;
    for (const auto& e : entries) {
        const fs::path p = fs::path(e.path).is_absolute() ? fs::path(e.path) : base / e.path;
        auto is = open_in(p);
        Instrument inst = read_instrument_csv(is, e.symbol);
        inst.asset_class = e.asset_class;
        inst.class_slot = e.class_slot;
        panel.instruments.push_back(std::move(inst));
    }

    // Align on the dates every instrument has.
    std::vector<std::string> common = panel.instruments.front().dates;
    for (const auto& inst : panel.instruments) {
        std::vector<std::string> next;
        std::set_intersection(common.begin(), common.end(), inst.dates.begin(), inst.dates.end(),
                              std::back_inserter(next));
        common.swap(next);
    }
    for (auto& inst : panel.instruments) {
        Instrument aligned = inst;
        aligned.dates.clear();
        aligned.bars.clear();
        std::size_t k = 0;
        for (std::size_t t = 0; t < inst.dates.size() && k < common.size(); ++t) {
            if (inst.dates[t] == common[k]) {
                aligned.dates.push_back(inst.dates[t]);
                aligned.bars.push_back(inst.bars[t]);
                ++k;
            }
        }
        inst = std::move(aligned);
    }
    panel.validate();
    return panel;
}

void save_panel(const AssetPanel& panel, const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::IOFailure, "cannot create " + dir + ": " + ec.message());
    const fs::path base(dir);

    std::ofstream manifest(base / "manifest.csv", std::ios::binary);
    if (!manifest) throw Error(ErrorKind::IOFailure, "cannot write manifest in " + dir);
    manifest << kManifestHeader << '\n';
    for (const auto& inst : panel.instruments) {
        const std::string file = inst.symbol + ".csv";
        std::ofstream os(base / file, std::ios::binary);
        if (!os) throw Error(ErrorKind::IOFailure, "cannot write " + (base / file).string());
        write_instrument_csv(os, inst);
        manifest << inst.symbol << ',' << to_string(inst.asset_class) << ',' << inst.class_slot
                 << ',' << file << '\n';
    }
    if (!manifest) throw Error(ErrorKind::IOFailure, "write failed in " + dir);
}

}  // namespace ttrnn
