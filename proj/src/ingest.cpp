#include "surveyq/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>

#include "surveyq/csv.hpp"
#include "surveyq/errors.hpp"
#include "surveyq/stats.hpp"

namespace surveyq {

namespace {

constexpr double kCompositionSumTol = 0.02;

// Row-level failure tagged with the column it came from; converted into one
// RowDiagnostic per row by the parsers.
struct FieldError {
    std::string column;
    std::string message;
};

double parse_real(const std::string& text, const std::string& column) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw FieldError{column, "malformed number '" + text + "'"};
    }
    if (!std::isfinite(value)) {
        throw FieldError{column, "non-finite number"};
    }
    return value;
}

std::int64_t parse_integer(const std::string& text, const std::string& column) {
    std::int64_t value = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw FieldError{column, "malformed integer '" + text + "'"};
    }
    return value;
}

Date parse_date_field(const std::string& text, const std::string& column) {
    try {
        return Date::parse(text);
    } catch (const ValidationError& e) {
        throw FieldError{column, e.what()};
    }
}

double parse_proportion(const std::string& text, const std::string& column) {
    const double value = parse_real(text, column);
    if (value < 0.0 || value > 1.0) {
        throw FieldError{column, "value " + text + " outside [0,1]"};
    }
    return value;
}

// Maps canonical column names to indices. Strict mode demands an exact
// header; lax mode accepts extra columns in any order.
class ColumnMap {
public:
    ColumnMap(const std::vector<std::string>& header, const std::vector<std::string>& canonical,
              bool lax, const std::string& what) {
        if (!lax) {
            if (header != canonical) {
                throw SchemaError(what + ": header must be exactly '" + join(canonical) +
                                  "' (strict mode; pass lax to relax)");
            }
            for (std::size_t i = 0; i < canonical.size(); ++i) index_[canonical[i]] = i;
            width_ = canonical.size();
            return;
        }
        for (std::size_t i = 0; i < header.size(); ++i) {
            index_.emplace(header[i], i);
        }
        for (const auto& name : canonical) {
            if (!index_.count(name)) {
                throw SchemaError(what + ": missing column '" + name + "'");
            }
        }
        width_ = header.size();
    }

    const std::string& get(const CsvRecord& record, const std::string& column) const {
        if (record.fields.size() != width_) {
            throw FieldError{column, "expected " + std::to_string(width_) + " fields, got " +
                                         std::to_string(record.fields.size())};
        }
        return record.fields[index_.at(column)];
    }

private:
    static std::string join(const std::vector<std::string>& names) {
        std::string out;
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (i) out.push_back(',');
            out += names[i];
        }
        return out;
    }

    std::map<std::string, std::size_t> index_;
    std::size_t width_ = 0;
};

std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

const std::vector<std::string> kWaveColumns = {
    "survey_id", "wave_start", "wave_end", "n", "estimate", "se", "design_effect", "cv_w"};

const std::vector<std::string> kOutcomeColumns = {
    "survey_id", "wave_start", "wave_end", "n",
    "vaccinated", "willing",    "hesitant", "design_effect", "cv_w"};

SurveyWave wave_from_record(const ColumnMap& columns, const CsvRecord& record) {
    SurveyWave wave;
    wave.survey_id = columns.get(record, "survey_id");
    if (wave.survey_id.empty()) {
        throw FieldError{"survey_id", "empty survey_id"};
    }
    wave.wave_start = parse_date_field(columns.get(record, "wave_start"), "wave_start");
    wave.wave_end = parse_date_field(columns.get(record, "wave_end"), "wave_end");
    if (wave.wave_start > wave.wave_end) {
        throw FieldError{"wave_end", "wave_end precedes wave_start"};
    }
    wave.n = parse_integer(columns.get(record, "n"), "n");
    if (wave.n < 1) {
        throw FieldError{"n", "n must be >= 1"};
    }
    wave.estimate = parse_proportion(columns.get(record, "estimate"), "estimate");

    const std::string& se_text = columns.get(record, "se");
    if (!se_text.empty()) {
        const double se = parse_real(se_text, "se");
        if (se < 0.0) throw FieldError{"se", "negative se"};
        wave.se = se;
    }
    const std::string& deff_text = columns.get(record, "design_effect");
    if (!deff_text.empty()) {
        const double deff = parse_real(deff_text, "design_effect");
        if (deff < 1.0) throw FieldError{"design_effect", "design effect below 1"};
        wave.design_effect = deff;
    }
    const std::string& cv_text = columns.get(record, "cv_w");
    if (!cv_text.empty()) {
        const double cv = parse_real(cv_text, "cv_w");
        if (cv < 0.0) throw FieldError{"cv_w", "negative cv_w"};
        wave.cv_w = cv;
    }
    if (wave.design_effect && wave.cv_w &&
        std::abs(*wave.design_effect - (1.0 + *wave.cv_w * *wave.cv_w)) > 1e-9) {
        throw FieldError{"design_effect", "design_effect inconsistent with 1 + cv_w^2"};
    }
    return wave;
}

}  // namespace

WaveParseResult parse_waves(const std::filesystem::path& path, bool lax) {
    const CsvFile csv = read_csv(path);
    const ColumnMap columns(csv.header, kWaveColumns, lax, path.filename().string());
    if (csv.records.empty()) {
        throw ValidationError(path.string() + ": no wave rows");
    }

    WaveParseResult out;
    for (const CsvRecord& record : csv.records) {
        try {
            out.waves.push_back(wave_from_record(columns, record));
        } catch (const FieldError& e) {
            out.rejected.push_back({record.line, e.column, e.message});
        }
    }
    return out;
}

std::string serialize_waves(std::span<const SurveyWave> waves) {
    std::string out = "survey_id,wave_start,wave_end,n,estimate,se,design_effect,cv_w\n";
    for (const SurveyWave& wave : waves) {
        std::vector<std::string> fields;
        fields.reserve(8);
        fields.push_back(wave.survey_id);
        fields.push_back(wave.wave_start.iso());
        fields.push_back(wave.wave_end.iso());
        fields.push_back(std::to_string(wave.n));
        fields.push_back(format_fixed(wave.estimate, 6));
        fields.push_back(wave.se ? format_fixed(*wave.se, 6) : "");
        fields.push_back(wave.design_effect ? format_fixed(*wave.design_effect, 6) : "");
        fields.push_back(wave.cv_w ? format_fixed(*wave.cv_w, 6) : "");
        out += csv_join(fields);
        out.push_back('\n');
    }
    return out;
}

BenchmarkSeries parse_benchmark_counts(const std::filesystem::path& path,
                                       const PopulationFrame& population) {
    const CsvFile csv = read_csv(path);
    const ColumnMap columns(csv.header, {"date", "cumulative_count"}, false,
                            path.filename().string());
    if (csv.records.empty()) {
        throw ValidationError(path.string() + ": no benchmark rows");
    }

    BenchmarkSeries series;
    series.population = population;
    series.entries.reserve(csv.records.size());
    for (const CsvRecord& record : csv.records) {
        try {
            BenchmarkEntry entry;
            entry.date = parse_date_field(columns.get(record, "date"), "date");
            const std::int64_t count =
                parse_integer(columns.get(record, "cumulative_count"), "cumulative_count");
            if (count < 0) {
                throw FieldError{"cumulative_count", "negative count"};
            }
            entry.cumulative_count = static_cast<double>(count);
            series.entries.push_back(entry);
        } catch (const FieldError& e) {
            // Benchmark files are ground truth: any bad row is fatal.
            throw ValidationError(path.string() + " line " + std::to_string(record.line) + " (" +
                                  e.column + "): " + e.message);
        }
    }
    series.as_of = series.entries.back().date;
    series.validate();
    return series;
}

BenchmarkSeries parse_benchmark_snapshot(const std::filesystem::path& path,
                                         const PopulationFrame& population) {
    // as_of is the trailing YYYY-MM-DD in the stem.
    const std::string stem = path.stem().string();
    if (stem.size() < 10) {
        throw ValidationError(path.string() + ": snapshot file name must end in its as_of date");
    }
    BenchmarkSeries series = parse_benchmark_counts(path, population);
    try {
        series.as_of = Date::parse(stem.substr(stem.size() - 10));
    } catch (const ValidationError&) {
        throw ValidationError(path.string() + ": snapshot file name must end in its as_of date");
    }
    return series;
}

AgeDoseTable parse_age_doses(const std::filesystem::path& path) {
    const CsvFile csv = read_csv(path);
    const ColumnMap columns(csv.header, {"date", "jurisdiction", "age_group", "cumulative_doses"},
                            false, path.filename().string());
    AgeDoseTable table;
    table.rows.reserve(csv.records.size());
    for (const CsvRecord& record : csv.records) {
        try {
            AgeDoseRow row;
            row.date = parse_date_field(columns.get(record, "date"), "date");
            row.jurisdiction = columns.get(record, "jurisdiction");
            row.age_group = columns.get(record, "age_group");
            if (row.age_group != "adult" && row.age_group != "minor") {
                throw FieldError{"age_group", "expected adult or minor, got '" + row.age_group + "'"};
            }
            const std::int64_t doses =
                parse_integer(columns.get(record, "cumulative_doses"), "cumulative_doses");
            if (doses < 0) {
                throw FieldError{"cumulative_doses", "negative doses"};
            }
            row.cumulative_doses = static_cast<double>(doses);
            table.rows.push_back(std::move(row));
        } catch (const FieldError& e) {
            throw ValidationError(path.string() + " line " + std::to_string(record.line) + " (" +
                                  e.column + "): " + e.message);
        }
    }
    table.validate();
    return table;
}

void CompositionTable::validate() const {
    std::map<std::string, KahanSum> per_dimension;
    std::set<std::pair<std::string, std::string>> seen;
    for (const CompositionRow& row : rows) {
        if (row.share < 0.0 || row.share > 1.0) {
            throw ValidationError("composition share outside [0,1] for " + row.dimension + "/" +
                                  row.category);
        }
        if (!seen.insert({row.dimension, row.category}).second) {
            throw ValidationError("duplicate composition category " + row.dimension + "/" +
                                  row.category);
        }
        per_dimension[row.dimension].add(row.share);
    }
    for (const auto& [dimension, sum] : per_dimension) {
        if (std::abs(sum.value() - 1.0) > kCompositionSumTol) {
            throw ValidationError("shares for dimension '" + dimension +
                                  "' sum to " + std::to_string(sum.value()) +
                                  ", outside 1 +/- 0.02");
        }
    }
}

CompositionTable parse_composition(const std::filesystem::path& path, std::string source) {
    const CsvFile csv = read_csv(path);
    const ColumnMap columns(csv.header, {"dimension", "category", "share"}, false,
                            path.filename().string());
    CompositionTable table;
    table.source = std::move(source);
    table.rows.reserve(csv.records.size());
    for (const CsvRecord& record : csv.records) {
        try {
            CompositionRow row;
            row.dimension = columns.get(record, "dimension");
            row.category = columns.get(record, "category");
            row.share = parse_proportion(columns.get(record, "share"), "share");
            table.rows.push_back(std::move(row));
        } catch (const FieldError& e) {
            throw ValidationError(path.string() + " line " + std::to_string(record.line) + " (" +
                                  e.column + "): " + e.message);
        }
    }
    table.validate();
    return table;
}

std::vector<CompositionDiff> composition_compare(const CompositionTable& sample,
                                                 const CompositionTable& benchmark) {
    std::map<std::pair<std::string, std::string>, double> benchmark_shares;
    for (const CompositionRow& row : benchmark.rows) {
        benchmark_shares[{row.dimension, row.category}] = row.share;
    }
    if (benchmark_shares.size() != sample.rows.size()) {
        throw SchemaError("composition tables cover different category sets");
    }
    std::vector<CompositionDiff> out;
    out.reserve(sample.rows.size());
    for (const CompositionRow& row : sample.rows) {
        auto it = benchmark_shares.find({row.dimension, row.category});
        if (it == benchmark_shares.end()) {
            throw SchemaError("category " + row.dimension + "/" + row.category +
                              " missing from benchmark table");
        }
        out.push_back({row.dimension, row.category, (row.share - it->second) * 100.0});
    }
    return out;
}

OutcomeParseResult parse_outcome_waves(const std::filesystem::path& path, bool lax) {
    const CsvFile csv = read_csv(path);
    const ColumnMap columns(csv.header, kOutcomeColumns, lax, path.filename().string());
    if (csv.records.empty()) {
        throw ValidationError(path.string() + ": no outcome rows");
    }

    OutcomeParseResult out;
    for (const CsvRecord& record : csv.records) {
        try {
            OutcomeWave ow;
            ow.wave.survey_id = columns.get(record, "survey_id");
            if (ow.wave.survey_id.empty()) {
                throw FieldError{"survey_id", "empty survey_id"};
            }
            ow.wave.wave_start = parse_date_field(columns.get(record, "wave_start"), "wave_start");
            ow.wave.wave_end = parse_date_field(columns.get(record, "wave_end"), "wave_end");
            if (ow.wave.wave_start > ow.wave.wave_end) {
                throw FieldError{"wave_end", "wave_end precedes wave_start"};
            }
            ow.wave.n = parse_integer(columns.get(record, "n"), "n");
            if (ow.wave.n < 1) {
                throw FieldError{"n", "n must be >= 1"};
            }
            ow.triple.vaccinated = parse_proportion(columns.get(record, "vaccinated"), "vaccinated");
            ow.triple.willing = parse_proportion(columns.get(record, "willing"), "willing");
            ow.triple.hesitant = parse_proportion(columns.get(record, "hesitant"), "hesitant");
            try {
                ow.triple.validate();
            } catch (const ValidationError& e) {
                throw FieldError{"hesitant", e.what()};
            }
            const std::string& deff_text = columns.get(record, "design_effect");
            if (!deff_text.empty()) {
                const double deff = parse_real(deff_text, "design_effect");
                if (deff < 1.0) throw FieldError{"design_effect", "design effect below 1"};
                ow.wave.design_effect = deff;
            }
            const std::string& cv_text = columns.get(record, "cv_w");
            if (!cv_text.empty()) {
                const double cv = parse_real(cv_text, "cv_w");
                if (cv < 0.0) throw FieldError{"cv_w", "negative cv_w"};
                ow.wave.cv_w = cv;
            }
            ow.wave.estimate = ow.triple.vaccinated;
            out.waves.push_back(std::move(ow));
        } catch (const FieldError& e) {
            out.rejected.push_back({record.line, e.column, e.message});
        }
    }
    return out;
}

}  // namespace surveyq
