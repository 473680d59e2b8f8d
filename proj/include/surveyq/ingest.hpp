#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "surveyq/benchmark.hpp"
#include "surveyq/core_metrics.hpp"
#include "surveyq/scenarios.hpp"

namespace surveyq {

/// One rejected input row: physical line, offending column, and why.
struct RowDiagnostic {
    std::size_t line = 0;
    std::string column;
    std::string message;
};

struct WaveParseResult {
    std::vector<SurveyWave> waves;
    std::vector<RowDiagnostic> rejected;
};

/// Canonical wave schema:
///   survey_id,wave_start,wave_end,n,estimate,se,design_effect,cv_w
/// se, design_effect, and cv_w may be empty. Proportions in input files are
/// always fractions in [0,1], never percentages.
///
/// Strict mode requires the header to match exactly; lax mode permits extra
/// columns (ignored) in any order. Rows that fail validation are skipped and
/// reported, one diagnostic per row. A file with no data rows is fatal.
WaveParseResult parse_waves(const std::filesystem::path& path, bool lax = false);

/// Canonical serialization of waves (proportions at 6 decimals). Parsing a
/// serialized table and serializing again is byte-identical.
std::string serialize_waves(std::span<const SurveyWave> waves);

/// Benchmark schema: date,cumulative_count with integer counts. Any schema,
/// monotonicity, or unit-guard violation is fatal and names the offending
/// date. as_of is the last entry's date unless given.
BenchmarkSeries parse_benchmark_counts(const std::filesystem::path& path,
                                       const PopulationFrame& population);

/// Same schema, but the snapshot's as_of date comes from the file name
/// (e.g. cdc_snapshot_2021-04-21.csv), since a snapshot may report counts
/// for dates well before it was taken.
BenchmarkSeries parse_benchmark_snapshot(const std::filesystem::path& path,
                                         const PopulationFrame& population);

/// Age-split schema: date,jurisdiction,age_group,cumulative_doses with
/// age_group in {adult, minor}.
AgeDoseTable parse_age_doses(const std::filesystem::path& path);

struct CompositionRow {
    std::string dimension;
    std::string category;
    double share = 0.0;
};

struct CompositionTable {
    std::string source;  // raw, weighted, or benchmark
    std::vector<CompositionRow> rows;

    /// Shares per dimension must sum to 1 within +/-0.02 (published tables
    /// round their cells).
    void validate() const;
};

/// Composition schema: dimension,category,share.
CompositionTable parse_composition(const std::filesystem::path& path, std::string source);

struct CompositionDiff {
    std::string dimension;
    std::string category;
    double diff_pp = 0.0;  // sample share minus benchmark share, percentage points
};

/// Per-category differences in percentage points. The two tables must cover
/// identical (dimension, category) sets.
std::vector<CompositionDiff> composition_compare(const CompositionTable& sample,
                                                 const CompositionTable& benchmark);

struct OutcomeWave {
    SurveyWave wave;  // wave.estimate holds the vaccinated share
    OutcomeTriple triple;
};

struct OutcomeParseResult {
    std::vector<OutcomeWave> waves;
    std::vector<RowDiagnostic> rejected;
};

/// Outcome schema:
///   survey_id,wave_start,wave_end,n,vaccinated,willing,hesitant,design_effect,cv_w
OutcomeParseResult parse_outcome_waves(const std::filesystem::path& path, bool lax = false);

}  // namespace surveyq
