#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace drselect::io {

using Json = nlohmann::ordered_json;

// %.17g for finite numbers, null otherwise.
std::string format_number(double v);

// Serializes with every floating-point number at 17 significant digits, so
// equal values always print identically.
std::string dump(const Json& j, int indent = 2);

void write_text(const std::filesystem::path& path, const std::string& text);

Json matrix_json(const std::vector<double>& values, std::size_t rows, std::size_t cols);

inline constexpr const char* kVersion = "1.0.0";

// Everything needed to rerun a job: subcommand, resolved configuration and
// its hash, seed, input files with content hashes, versions and the active
// SIMD kernel set. Worker count and output paths are omitted; they never
// change results.
Json manifest(const std::string& command, const std::string& canonical_config, std::uint64_t seed,
              const Json& inputs);

}  // namespace drselect::io
