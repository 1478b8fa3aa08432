#include "ttrnn/random.hpp"

#include "ttrnn/text.hpp"

namespace ttrnn {

Rng make_stream(std::uint64_t seed, std::string_view name) {
    const std::uint64_t h = text::fnv1a(name);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
    return Rng(seq);
}

}  // namespace ttrnn
