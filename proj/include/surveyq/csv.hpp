#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace surveyq {

struct CsvRecord {
    std::size_t line = 0;  // 1-based physical line number
    std::vector<std::string> fields;
};

struct CsvFile {
    std::vector<std::string> header;
    std::vector<CsvRecord> records;
};

/// Reads a comma-separated file with a mandatory header row. Handles quoted
/// fields with doubled-quote escapes; lines starting with '#' are comment
/// lines and are skipped. Throws ValidationError for unreadable or empty
/// files.
CsvFile read_csv(const std::filesystem::path& path);

/// Quotes a field only when it contains a comma, quote, or newline.
std::string csv_escape(const std::string& field);

std::string csv_join(const std::vector<std::string>& fields);

}  // namespace surveyq
