#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "ttrnn/features.hpp"
#include "ttrnn/neural.hpp"

namespace ttrnn {

/// Flat `key = value` text configuration; `#` starts a comment. Later assignments win.
class KeyValueConfig {
public:
    static KeyValueConfig parse(std::string_view content);
    static KeyValueConfig from_file(const std::string& path);

    void set(std::string key, std::string value);
    /// Parses "key=value" (as given on the command line).
    void set_assignment(std::string_view assignment);
    std::optional<std::string> get(const std::string& key) const;
    const std::map<std::string, std::string>& entries() const noexcept { return values_; }

    std::string to_string() const;

private:
    std::map<std::string, std::string> values_;
};

/// Everything needed to reproduce one run.
///
/// Recognised keys (defaults in brackets):
///   manifest                 CSV manifest path; empty selects synthetic data   []
///   target                   target symbol                                     [JPYUSD]
///   split                    training fraction of dates                        [0.9]
///   seed                     run seed                                          [0]
///   out                      output directory                                  [out]
///   init                     random | zero                                     [random]
///   epochs, batch_size, learning_rate, seq_len                                 [20, 66, 1e-5, 10]
///   input_dims, hidden_dims  comma lists                     [2,2,5,6,4 / 4,4,4,4,4]
///   ranks                    single rank or full list R_0..R_N                 [6]
///   synth.days, synth.components, synth.signal_strength, synth.signal_driver,
///   synth.target_vol, synth.start_date                 [1000, 6, 0, SPX, 0.006, 2006-05-01]
struct RunConfig {
    std::string manifest;
    std::string target = "JPYUSD";
    double split = 0.9;
    std::uint64_t seed = 0;
    std::string out_dir = "out";
    std::string init = "random";
    TrainConfig train;
    std::vector<std::size_t> input_dims{2, 2, 5, 6, 4};
    std::vector<std::size_t> hidden_dims{4, 4, 4, 4, 4};
    SynthConfig synth;

    /// Throws InvalidConfig on unknown keys or bad values.
    static RunConfig from(const KeyValueConfig& kv);
    KeyValueConfig resolved() const;

    ModelDims model_dims() const;
    void validate() const;
};

}  // namespace ttrnn
