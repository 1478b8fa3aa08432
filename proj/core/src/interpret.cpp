#include "ttrnn/interpret.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "ttrnn/error.hpp"
#include "ttrnn/text.hpp"

namespace ttrnn {

double normalized_core_change(const DenseTensor& before, const DenseTensor& after) {
    if (before.shape() != after.shape()) {
        throw Error(ErrorKind::ShapeDrift, "core shape changed from " + before.shape().to_string() +
                                               " to " + after.shape().to_string());
    }
    double sq = 0.0;
    const auto a = before.data();
    const auto b = after.data();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = b[i] - a[i];
        sq += d * d;
    }
    return sq / static_cast<double>(before.size());
}

CoreChangeLog core_change(std::span<const CoreSnapshot> snapshots) {
    if (snapshots.size() < 2) {
        throw Error(ErrorKind::ShapeDrift, "need at least two epoch snapshots");
    }
    const std::size_t n_cores = snapshots.front().size();
    CoreChangeLog log;
    for (const auto& core : snapshots.front()) log.core_shapes.push_back(core.shape());
    log.values.assign(n_cores, std::vector<double>(snapshots.size() - 1, 0.0));
    for (std::size_t e = 1; e < snapshots.size(); ++e) {
        if (snapshots[e].size() != n_cores) {
            throw Error(ErrorKind::ShapeDrift, "number of cores changed between epochs");
        }
        for (std::size_t n = 0; n < n_cores; ++n) {
            log.values[n][e - 1] = normalized_core_change(snapshots[e - 1][n], snapshots[e][n]);
        }
    }
    return log;
}

std::vector<ModalImportance> modal_ranking(const CoreChangeLog& log) {
    std::vector<ModalImportance> out;
    for (std::size_t n = 0; n < log.num_cores(); ++n) {
        const auto& v = log.values[n];
        out.push_back({n + 1, std::accumulate(v.begin(), v.end(), 0.0),
                       mode_label(n + 1, log.num_cores())});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.aggregate > b.aggregate; });
    return out;
}

std::string mode_label(std::size_t core, std::size_t num_cores) {
    if (num_cores == 5) {
        switch (core) {
            case 1: return "features (sub-mode 1 of 3)";
            case 2: return "features (sub-mode 2 of 3)";
            case 3: return "features (sub-mode 3 of 3)";
            case 4: return "class components (intra-class)";
            case 5: return "asset classes (inter-class)";
            default: break;
        }
    }
    return "mode " + std::to_string(core);
}

void write_core_change_csv(std::ostream& os, const CoreChangeLog& log) {
    os << "core,epoch,normalized_change\n";
    for (std::size_t n = 0; n < log.num_cores(); ++n) {
        for (std::size_t k = 0; k < log.values[n].size(); ++k) {
            os << n + 1 << ',' << log.first_epoch + k << ','
               << text::format_double(log.values[n][k]) << '\n';
        }
    }
}

CoreChangeLog read_core_change_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || text::trim(line) != "core,epoch,normalized_change") {
        throw Error(ErrorKind::ParseError, "missing core-change CSV header");
    }
    std::map<std::size_t, std::map<std::size_t, double>> rows;
    while (std::getline(is, line)) {
        if (text::trim(line).empty()) continue;
        const auto f = text::split(line, ',');
        if (f.size() != 3) throw Error(ErrorKind::ParseError, "bad core-change row: " + line);
        const std::size_t core = text::parse_size(f[0]);
        const std::size_t epoch = text::parse_size(f[1]);
        if (core == 0) throw Error(ErrorKind::ParseError, "core indices are 1-based");
        rows[core][epoch] = text::parse_double(f[2]);
    }
    CoreChangeLog log;
    if (rows.empty()) throw Error(ErrorKind::ParseError, "empty core-change log");
    const std::size_t n_cores = rows.rbegin()->first;
    const auto& first = rows.begin()->second;
    log.first_epoch = first.begin()->first;
    const std::size_t n_epochs = first.size();
    log.values.assign(n_cores, {});
    for (std::size_t n = 1; n <= n_cores; ++n) {
        auto it = rows.find(n);
        if (it == rows.end() || it->second.size() != n_epochs) {
            throw Error(ErrorKind::ParseError, "incomplete core-change log for core " +
                                                   std::to_string(n));
        }
        std::size_t expect = log.first_epoch;
        for (const auto& [epoch, v] : it->second) {
            if (epoch != expect++) {
                throw Error(ErrorKind::ParseError, "non-contiguous epochs for core " +
                                                       std::to_string(n));
            }
            log.values[n - 1].push_back(v);
        }
    }
    return log;
}

std::string ranking_json(const CoreChangeLog& log) {
    nlohmann::ordered_json j;
    j["num_cores"] = log.num_cores();
    j["first_epoch"] = log.first_epoch;
    j["last_epoch"] = log.first_epoch + log.num_epochs() - 1;
    j["aggregate"] = "sum over epochs of normalized core change";
    auto& ranking = j["ranking"] = nlohmann::ordered_json::array();
    std::size_t rank = 1;
    for (const auto& m : modal_ranking(log)) {
        ranking.push_back({{"rank", rank++},
                           {"core", m.core},
                           {"mode", m.mode},
                           {"aggregate_change", m.aggregate}});
    }
    return j.dump(2) + "\n";
}

}  // namespace ttrnn
