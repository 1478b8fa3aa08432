#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ttrnn {

using Rng = std::mt19937_64;

/// Independent generator for one named consumer of the run seed ("init", "shuffle",
/// "synth", ...). Adding a new stream never perturbs the existing ones.
Rng make_stream(std::uint64_t seed, std::string_view name);

}  // namespace ttrnn
