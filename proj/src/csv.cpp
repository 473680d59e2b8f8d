#include "surveyq/csv.hpp"

#include <fstream>
#include <sstream>

#include "surveyq/errors.hpp"

namespace surveyq {

namespace {

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current.push_back(c);
            }
        } else if (c == '"' && current.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (quoted) {
        throw ValidationError("line " + std::to_string(line_no) + ": unterminated quote");
    }
    fields.push_back(std::move(current));
    return fields;
}

}  // namespace

CsvFile read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open file: " + path.string());
    }
    CsvFile out;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (!have_header) {
            out.header = split_csv_line(line, line_no);
            have_header = true;
        } else {
            out.records.push_back({line_no, split_csv_line(line, line_no)});
        }
    }
    if (!have_header) {
        throw ValidationError("empty file: " + path.string());
    }
    return out;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string csv_join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += csv_escape(fields[i]);
    }
    return out;
}

}  // namespace surveyq
