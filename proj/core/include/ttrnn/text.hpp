#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ttrnn::text {

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double v);
double parse_double(std::string_view s);
std::size_t parse_size(std::string_view s);

std::vector<std::string_view> split(std::string_view s, char sep);
std::string_view trim(std::string_view s);

/// Comma separated list of positive integers, e.g. "2,2,5,6,4".
std::vector<std::size_t> parse_size_list(std::string_view s);
std::string join(const std::vector<std::size_t>& v, char sep = ',');

/// FNV-1a 64-bit hash, used for run manifests.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 1469598103934665603ULL);
std::string hex64(std::uint64_t v);

}  // namespace ttrnn::text
