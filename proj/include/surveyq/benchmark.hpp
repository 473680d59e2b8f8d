#pragma once

#include <span>
#include <string>
#include <vector>

#include "surveyq/core_metrics.hpp"
#include "surveyq/date.hpp"

namespace surveyq {

struct BenchmarkEntry {
    Date date;
    double cumulative_count = 0.0;
};

/// Dated cumulative counts against a population frame. Counts are integral
/// when read from files; series produced by imputation carry fractional
/// counts and are rounded only at serialization time.
struct BenchmarkSeries {
    std::vector<BenchmarkEntry> entries;
    PopulationFrame population;
    Date as_of;

    /// Enforces ascending dates, nondecreasing counts, and the unit-error
    /// guard count <= 1.02 * N. Throws ValidationError naming the first
    /// offending date.
    void validate() const;
};

struct AgeDoseRow {
    Date date;
    std::string jurisdiction;
    std::string age_group;
    double cumulative_doses = 0.0;
};

struct AgeDoseTable {
    std::vector<AgeDoseRow> rows;

    /// Per (jurisdiction, group), doses must be nondecreasing over dates.
    void validate() const;
};

/// Scales the benchmark totals by the share of doses going to the `adult`
/// age group among all jurisdictions except `excluded_jurisdiction`,
/// producing an adult-only series. Dates are matched exactly.
BenchmarkSeries impute_adult_series(const AgeDoseTable& ages, const BenchmarkSeries& totals,
                                    const std::string& excluded_jurisdiction);

/// Step-function lookup: proportion at the latest entry dated <= query.
/// Throws OutOfRangeError for queries outside the series span.
double benchmark_at(const BenchmarkSeries& series, Date query);

/// Multiplies `value` by each factor, clipping to [0,1]. Factors must be
/// strictly positive.
std::vector<double> sensitivity_band(double value, std::span<const double> factors);

struct GroupCount {
    std::string group;
    double count = 0.0;
};

struct GroupPopulation {
    std::string group;
    double population = 0.0;
};

struct GroupBounds {
    std::string group;
    double lower = 0.0;
    double upper = 0.0;
};

/// Bounds on per-group uptake when some doses have no age information.
/// lower allocates none of the unknown doses to the group, upper all of
/// them; when the upper bound would exceed 1, the overflow doses raise the
/// other group's lower bound and the upper is clipped. Exactly two groups.
std::vector<GroupBounds> age_group_bounds(std::span<const GroupCount> known, double unknown,
                                          std::span<const GroupPopulation> group_pops);

struct RevisionLag {
    std::int64_t lag_days = 0;
    double percent_increase = 0.0;
};

struct RevisionCurve {
    Date target;
    std::vector<RevisionLag> lags;
    std::vector<Date> missing_snapshots;  // as_of dates lacking the target entry
};

/// How much the count first reported for each target date grows in later
/// snapshots, as a percentage of the first report, per lag in days.
std::vector<RevisionCurve> revision_curve(std::span<const BenchmarkSeries> snapshots,
                                          std::span<const Date> target_dates);

}  // namespace surveyq
