#include "surveyq/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "surveyq/csv.hpp"
#include "surveyq/errors.hpp"

namespace surveyq {

std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open file for digest: " + path.string());
    }
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char buffer[1 << 14];
    while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= static_cast<unsigned char>(buffer[i]);
            hash *= 0x100000001b3ULL;
        }
    }
    return hash;
}

std::string digest_hex(std::uint64_t digest) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(digest));
    return buf;
}

Provenance base_provenance() {
    return {{"artifact", kArtifactVersion}};
}

void add_input_digest(Provenance& provenance, const std::string& key,
                      const std::filesystem::path& path) {
    provenance.emplace_back(key, path.filename().string() + " " + digest_hex(fnv1a64_file(path)));
}

std::string render_csv(const OutputTable& table, const Provenance& provenance) {
    std::string out;
    for (const auto& [key, value] : provenance) {
        out += "# " + key + ": " + value + "\n";
    }
    out += csv_join(table.columns);
    out.push_back('\n');
    for (const auto& row : table.rows) {
        out += csv_join(row);
        out.push_back('\n');
    }
    return out;
}

std::string render_json(const OutputTable& table, const Provenance& provenance) {
    nlohmann::ordered_json doc;
    nlohmann::ordered_json prov = nlohmann::ordered_json::object();
    for (const auto& [key, value] : provenance) {
        prov[key] = value;
    }
    doc["provenance"] = std::move(prov);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < table.columns.size(); ++i) {
            obj[table.columns[i]] = row[i];
        }
        rows.push_back(std::move(obj));
    }
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw ValidationError("cannot write to " + tmp.string());
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw ValidationError("short write to " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

std::string format_proportion(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    return buf;
}

std::string format_real(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    double parsed = 0.0;
    std::sscanf(buf, "%lf", &parsed);
    // Prefer the shortest representation that still round-trips.
    for (int precision = 1; precision <= 16; ++precision) {
        char candidate[40];
        std::snprintf(candidate, sizeof(candidate), "%.*g", precision, value);
        double back = 0.0;
        std::sscanf(candidate, "%lf", &back);
        if (back == value) {
            return candidate;
        }
    }
    return buf;
}

std::string format_count(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.0f", value);
    return buf;
}

}  // namespace surveyq
