#include "surveyq/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "surveyq/errors.hpp"

namespace surveyq {

namespace {

// Slack over the population size before a cumulative count is treated as a
// unit error (count in doses, count for the wrong population, ...). The 2%
// margin leaves room for numerator/denominator mismatches of the magnitude
// seen in published national series.
constexpr double kCountOverPopulationSlack = 1.02;

}  // namespace

void BenchmarkSeries::validate() const {
    if (population.size < 1) {
        throw ValidationError("benchmark series needs a positive population size");
    }
    const double cap = kCountOverPopulationSlack * static_cast<double>(population.size);
    const BenchmarkEntry* prev = nullptr;
    for (const auto& entry : entries) {
        if (entry.cumulative_count < 0.0) {
            throw ValidationError("negative cumulative count at " + entry.date.iso());
        }
        if (prev) {
            if (!(prev->date < entry.date)) {
                throw ValidationError("benchmark dates not strictly ascending at " +
                                      entry.date.iso());
            }
            if (entry.cumulative_count < prev->cumulative_count) {
                throw ValidationError("cumulative count decreases at " + entry.date.iso() +
                                      " (previous " + prev->date.iso() + ")");
            }
        }
        if (entry.cumulative_count > cap) {
            throw ValidationError("cumulative count at " + entry.date.iso() +
                                  " exceeds 1.02 x population; check units");
        }
        prev = &entry;
    }
}

void AgeDoseTable::validate() const {
    std::map<std::pair<std::string, std::string>, std::pair<Date, double>> last;
    for (const auto& row : rows) {
        if (row.cumulative_doses < 0.0) {
            throw ValidationError("negative cumulative doses for " + row.jurisdiction + " at " +
                                  row.date.iso());
        }
        auto key = std::make_pair(row.jurisdiction, row.age_group);
        auto it = last.find(key);
        if (it != last.end() && row.date > it->second.first &&
            row.cumulative_doses < it->second.second) {
            throw ValidationError("cumulative doses decrease for " + row.jurisdiction + "/" +
                                  row.age_group + " at " + row.date.iso());
        }
        if (it == last.end() || row.date > it->second.first) {
            last[key] = {row.date, row.cumulative_doses};
        }
    }
}

BenchmarkSeries impute_adult_series(const AgeDoseTable& ages, const BenchmarkSeries& totals,
                                    const std::string& excluded_jurisdiction) {
    totals.validate();
    ages.validate();

    // Aggregate adult / total doses per date over non-excluded jurisdictions.
    struct DoseSplit {
        double adult = 0.0;
        double all = 0.0;
        bool any_jurisdiction = false;
    };
    std::map<Date, DoseSplit> by_date;
    for (const auto& row : ages.rows) {
        if (row.jurisdiction == excluded_jurisdiction) continue;
        auto& split = by_date[row.date];
        split.any_jurisdiction = true;
        split.all += row.cumulative_doses;
        if (row.age_group == "adult") {
            split.adult += row.cumulative_doses;
        } else if (row.age_group != "minor") {
            throw SchemaError("unknown age_group '" + row.age_group +
                              "' (expected adult or minor)");
        }
    }

    BenchmarkSeries out;
    out.population = totals.population;
    out.as_of = totals.as_of;
    out.entries.reserve(totals.entries.size());
    for (const auto& entry : totals.entries) {
        if (entry.cumulative_count == 0.0) {
            out.entries.push_back({entry.date, 0.0});
            continue;
        }
        auto it = by_date.find(entry.date);
        if (it == by_date.end() || !it->second.any_jurisdiction) {
            throw ImputationImpossibleError("no age-split data outside excluded jurisdiction on " +
                                            entry.date.iso());
        }
        if (it->second.all <= 0.0) {
            throw ImputationImpossibleError("age-split doses sum to zero on " + entry.date.iso());
        }
        const double adult_share = it->second.adult / it->second.all;
        out.entries.push_back({entry.date, adult_share * entry.cumulative_count});
    }
    return out;
}

double benchmark_at(const BenchmarkSeries& series, Date query) {
    if (series.entries.empty()) {
        throw ValidationError("benchmark series is empty");
    }
    if (query < series.entries.front().date || query > series.entries.back().date) {
        throw OutOfRangeError("query " + query.iso() + " outside benchmark span " +
                              series.entries.front().date.iso() + ".." +
                              series.entries.back().date.iso());
    }
    // Latest entry dated <= query (no interpolation).
    auto it = std::upper_bound(series.entries.begin(), series.entries.end(), query,
                               [](Date q, const BenchmarkEntry& e) { return q < e.date; });
    --it;
    return it->cumulative_count / static_cast<double>(series.population.size);
}

std::vector<double> sensitivity_band(double value, std::span<const double> factors) {
    if (value < 0.0 || value > 1.0) {
        throw ValidationError("sensitivity_band value outside [0,1]");
    }
    std::vector<double> out;
    out.reserve(factors.size());
    for (double factor : factors) {
        if (!(factor > 0.0)) {
            throw InvalidFactorError("sensitivity factors must be strictly positive");
        }
        out.push_back(std::clamp(value * factor, 0.0, 1.0));
    }
    return out;
}

std::vector<GroupBounds> age_group_bounds(std::span<const GroupCount> known, double unknown,
                                          std::span<const GroupPopulation> group_pops) {
    if (known.size() != 2 || group_pops.size() != 2) {
        throw ValidationError("age_group_bounds expects exactly two groups");
    }
    if (unknown < 0.0) {
        throw ValidationError("unknown dose count must be nonnegative");
    }

    std::vector<GroupBounds> out(2);
    for (std::size_t g = 0; g < 2; ++g) {
        if (known[g].group != group_pops[g].group) {
            throw ValidationError("group order mismatch between counts and populations");
        }
        if (known[g].count < 0.0 || !(group_pops[g].population > 0.0)) {
            throw ValidationError("invalid counts or population for group " + known[g].group);
        }
        if (known[g].count > group_pops[g].population) {
            throw InconsistentCountsError("known doses exceed population for group " +
                                          known[g].group);
        }
        out[g].group = known[g].group;
        out[g].lower = known[g].count / group_pops[g].population;
        out[g].upper = (known[g].count + unknown) / group_pops[g].population;
    }

    // If allocating every unknown dose to one group implies >100% uptake,
    // the excess doses must have gone to the other group, raising its lower
    // bound.
    for (std::size_t g = 0; g < 2; ++g) {
        const std::size_t other = 1 - g;
        if (out[g].upper > 1.0) {
            const double overflow = known[g].count + unknown - group_pops[g].population;
            out[g].upper = 1.0;
            out[other].lower =
                (known[other].count + overflow) / group_pops[other].population;
        }
    }
    for (auto& bounds : out) {
        bounds.lower = std::min(bounds.lower, 1.0);
        if (bounds.lower > bounds.upper) {
            throw InconsistentCountsError("bounds crossed for group " + bounds.group +
                                          "; counts inconsistent with populations");
        }
    }
    return out;
}

std::vector<RevisionCurve> revision_curve(std::span<const BenchmarkSeries> snapshots,
                                          std::span<const Date> target_dates) {
    if (snapshots.size() < 2) {
        throw ValidationError("revision_curve needs at least two snapshots");
    }
    std::vector<const BenchmarkSeries*> ordered;
    ordered.reserve(snapshots.size());
    for (const auto& snap : snapshots) ordered.push_back(&snap);
    std::sort(ordered.begin(), ordered.end(),
              [](const BenchmarkSeries* a, const BenchmarkSeries* b) { return a->as_of < b->as_of; });
    for (std::size_t i = 1; i < ordered.size(); ++i) {
        if (!(ordered[i - 1]->as_of < ordered[i]->as_of)) {
            throw ValidationError("snapshot as_of dates must be distinct");
        }
    }

    auto count_at = [](const BenchmarkSeries& series, Date d) -> const BenchmarkEntry* {
        auto it = std::lower_bound(series.entries.begin(), series.entries.end(), d,
                                   [](const BenchmarkEntry& e, Date q) { return e.date < q; });
        if (it == series.entries.end() || !(it->date == d)) return nullptr;
        return &*it;
    };

    const BenchmarkSeries& first = *ordered.front();
    std::vector<RevisionCurve> out;
    out.reserve(target_dates.size());
    for (Date target : target_dates) {
        const BenchmarkEntry* baseline = count_at(first, target);
        if (!baseline) {
            throw ValidationError("target date " + target.iso() +
                                  " missing from earliest snapshot " + first.as_of.iso());
        }
        if (baseline->cumulative_count <= 0.0) {
            throw ComputationError("first report for " + target.iso() +
                                   " is zero; percent increase undefined");
        }
        RevisionCurve curve;
        curve.target = target;
        for (std::size_t i = 1; i < ordered.size(); ++i) {
            const BenchmarkEntry* later = count_at(*ordered[i], target);
            if (!later) {
                curve.missing_snapshots.push_back(ordered[i]->as_of);
                continue;
            }
            RevisionLag lag;
            lag.lag_days = days_between(first.as_of, ordered[i]->as_of);
            lag.percent_increase = (later->cumulative_count - baseline->cumulative_count) /
                                   baseline->cumulative_count * 100.0;
            curve.lags.push_back(lag);
        }
        out.push_back(std::move(curve));
    }
    return out;
}

}  // namespace surveyq
