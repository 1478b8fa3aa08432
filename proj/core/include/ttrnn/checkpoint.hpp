#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "ttrnn/neural.hpp"

namespace ttrnn {

struct CheckpointMeta {
    std::uint64_t seed = 0;
    std::size_t epoch = 0;
};

struct Checkpoint {
    TTRNNModel model;
    CheckpointMeta meta;
};

/// Text checkpoint: header with dims, ranks, seed and epoch, then the TT input cores
/// in the tt-format serialization, then the dense bias, feedback and head tensors.
void write_checkpoint(std::ostream& os, const TTRNNModel& model, const CheckpointMeta& meta);
Checkpoint read_checkpoint(std::istream& is);

void save_checkpoint(const std::string& path, const TTRNNModel& model, const CheckpointMeta& meta);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace ttrnn
