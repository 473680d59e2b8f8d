#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace surveyq {

inline constexpr const char* kArtifactVersion = "surveyq 0.1.0";

/// FNV-1a 64-bit digest of a file's bytes, for provenance headers.
std::uint64_t fnv1a64_file(const std::filesystem::path& path);

std::string digest_hex(std::uint64_t digest);

/// Ordered key/value pairs echoed into every output so a result can be tied
/// back to its inputs and configuration. Deliberately timestamp-free: equal
/// inputs must produce byte-identical outputs.
using Provenance = std::vector<std::pair<std::string, std::string>>;

Provenance base_provenance();

void add_input_digest(Provenance& provenance, const std::string& key,
                      const std::filesystem::path& path);

/// A rendered table: ordered column names plus pre-formatted cells. The same
/// cells back both the CSV and the JSON renderings.
struct OutputTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

/// CSV with '#'-prefixed provenance comment lines before the header row.
std::string render_csv(const OutputTable& table, const Provenance& provenance);

/// {"provenance": {...}, "rows": [{column: cell, ...}, ...]}
std::string render_json(const OutputTable& table, const Provenance& provenance);

/// Write-then-rename so readers never observe a partial file.
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string format_proportion(double value);  // fixed, 6 decimals
std::string format_real(double value);        // shortest round-trip
std::string format_count(double value);       // integral rendering of a count

}  // namespace surveyq
