#include "surveyq/ingest.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "surveyq/date.hpp"
#include "surveyq/errors.hpp"

using namespace surveyq;

namespace {

const std::filesystem::path kFixtures = SURVEYQ_FIXTURE_DIR;

class TempFile {
public:
    explicit TempFile(const std::string& content) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("surveyq_test_" + std::to_string(++counter) + ".csv");
        std::ofstream out(path_);
        out << content;
    }
    ~TempFile() { std::filesystem::remove(path_); }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

const char* kWaveHeader = "survey_id,wave_start,wave_end,n,estimate,se,design_effect,cv_w\n";

}  // namespace

TEST_CASE("date parsing is strict ISO-8601") {
    CHECK(Date::parse("2021-05-15") == Date{2021, 5, 15});
    CHECK(Date::parse("2020-02-29") == Date{2020, 2, 29});  // leap year
    CHECK(Date::parse("2021-05-15").iso() == "2021-05-15");
    CHECK(days_between(Date{2021, 4, 12}, Date{2021, 5, 27}) == 45);

    for (const char* bad : {"2021-02-29", "2021-13-01", "2021-00-10", "2021-01-32",
                            "21-01-01", "2021/01/01", "2021-1-1", ""}) {
        CHECK_THROWS_AS(Date::parse(bad), ValidationError);
    }
}

TEST_CASE("csv fields with commas survive quoting") {
    TempFile file(std::string(kWaveHeader) +
                  "\"panel, tracking\",2021-01-01,2021-01-07,100,0.5,,,\n");
    const auto result = parse_waves(file.path());
    REQUIRE(result.waves.size() == 1);
    CHECK(result.waves[0].survey_id == "panel, tracking");
    // And the canonical serialization re-quotes it.
    const std::string serialized = serialize_waves(result.waves);
    CHECK(serialized.find("\"panel, tracking\"") != std::string::npos);
}

TEST_CASE("parse_waves reads the bundled fixtures") {
    const auto fb = parse_waves(kFixtures / "fb_waves.csv");
    CHECK(fb.rejected.empty());
    REQUIRE(fb.waves.size() == 19);
    std::int64_t total_n = 0;
    for (const auto& wave : fb.waves) total_n += wave.n;
    CHECK(total_n == 4'525'633);
    CHECK(fb.waves.front().design_effect == doctest::Approx(1.48));
    CHECK_FALSE(fb.waves.front().cv_w.has_value());

    const auto hp = parse_waves(kFixtures / "hp_waves.csv");
    REQUIRE(hp.waves.size() == 8);
    std::int64_t hp_n = 0;
    for (const auto& wave : hp.waves) hp_n += wave.n;
    CHECK(hp_n == 606'615);

    const auto ax = parse_waves(kFixtures / "ax_waves.csv");
    REQUIRE(ax.waves.size() == 11);
    std::int64_t ax_n = 0;
    for (const auto& wave : ax.waves) ax_n += wave.n;
    CHECK(ax_n == 11'421);
}

TEST_CASE("parse_waves row diagnostics") {
    SUBCASE("estimate outside [0,1] is rejected with line and column") {
        TempFile file(std::string(kWaveHeader) +
                      "s,2021-01-01,2021-01-07,100,1.7,,,\n"
                      "s,2021-01-08,2021-01-14,100,0.5,,,\n");
        const auto result = parse_waves(file.path());
        CHECK(result.waves.size() == 1);
        REQUIRE(result.rejected.size() == 1);
        CHECK(result.rejected[0].line == 2);
        CHECK(result.rejected[0].column == "estimate");
    }
    SUBCASE("inverted dates rejected") {
        TempFile file(std::string(kWaveHeader) + "s,2021-02-01,2021-01-07,100,0.5,,,\n");
        const auto result = parse_waves(file.path());
        CHECK(result.waves.empty());
        REQUIRE(result.rejected.size() == 1);
        CHECK(result.rejected[0].column == "wave_end");
    }
    SUBCASE("malformed numeric rejected") {
        TempFile file(std::string(kWaveHeader) + "s,2021-01-01,2021-01-07,12x,0.5,,,\n");
        const auto result = parse_waves(file.path());
        REQUIRE(result.rejected.size() == 1);
        CHECK(result.rejected[0].column == "n");
    }
    SUBCASE("exactly one diagnostic per rejected row") {
        // Two problems in one row; only the first is reported.
        TempFile file(std::string(kWaveHeader) + "s,2021-02-01,2021-01-07,0,9.9,,,\n");
        const auto result = parse_waves(file.path());
        CHECK(result.rejected.size() == 1);
    }
    SUBCASE("empty file is fatal") {
        TempFile file("");
        CHECK_THROWS_AS(parse_waves(file.path()), ValidationError);
        TempFile header_only(kWaveHeader);
        CHECK_THROWS_AS(parse_waves(header_only.path()), ValidationError);
    }
}

TEST_CASE("parse_waves schema strictness") {
    const std::string extra_column =
        "survey_id,wave_start,wave_end,n,estimate,se,design_effect,cv_w,mystery\n"
        "s,2021-01-01,2021-01-07,100,0.5,,,,42\n";
    TempFile file(extra_column);
    CHECK_THROWS_AS(parse_waves(file.path()), SchemaError);
    // Lax mode tolerates the unknown column.
    const auto result = parse_waves(file.path(), true);
    CHECK(result.waves.size() == 1);

    const std::string reordered =
        "estimate,n,survey_id,wave_start,wave_end,se,design_effect,cv_w\n"
        "0.5,100,s,2021-01-01,2021-01-07,,,\n";
    TempFile reordered_file(reordered);
    CHECK_THROWS_AS(parse_waves(reordered_file.path()), SchemaError);
    CHECK(parse_waves(reordered_file.path(), true).waves.size() == 1);
}

TEST_CASE("serialize_waves round-trips byte-for-byte") {
    const auto parsed = parse_waves(kFixtures / "fb_waves.csv");
    const std::string once = serialize_waves(parsed.waves);

    TempFile file(once);
    const auto reparsed = parse_waves(file.path());
    CHECK(reparsed.rejected.empty());
    const std::string twice = serialize_waves(reparsed.waves);
    CHECK(once == twice);
}

TEST_CASE("parse_benchmark_counts") {
    const PopulationFrame adults{255'000'000, "US adults"};
    SUBCASE("bundled fixture is monotone and accepted") {
        const auto series = parse_benchmark_counts(kFixtures / "cdc_benchmark.csv", adults);
        CHECK(series.entries.size() > 100);
        CHECK(series.as_of == Date{2021, 5, 31});
        CHECK(benchmark_at(series, Date{2021, 5, 15}) == doctest::Approx(0.57).epsilon(1e-12));
    }
    SUBCASE("decreasing count is fatal and names the date") {
        TempFile file(
            "date,cumulative_count\n2021-01-01,100\n2021-01-02,90\n");
        CHECK_THROWS_WITH_AS(parse_benchmark_counts(file.path(), adults),
                             doctest::Contains("2021-01-02"), ValidationError);
    }
    SUBCASE("unit-error guard") {
        TempFile file("date,cumulative_count\n2021-01-01,600000000\n");
        CHECK_THROWS_AS(parse_benchmark_counts(file.path(), adults), ValidationError);
    }
    SUBCASE("non-integer count is fatal") {
        TempFile file("date,cumulative_count\n2021-01-01,12.5\n");
        CHECK_THROWS_AS(parse_benchmark_counts(file.path(), adults), ValidationError);
    }
}

TEST_CASE("parse_age_doses validates group names and monotonicity") {
    const auto table = parse_age_doses(kFixtures / "cdc_age_doses.csv");
    CHECK(table.rows.size() == 30);

    TempFile bad_group(
        "date,jurisdiction,age_group,cumulative_doses\n2021-01-01,east,senior,10\n");
    CHECK_THROWS_AS(parse_age_doses(bad_group.path()), ValidationError);

    TempFile decreasing(
        "date,jurisdiction,age_group,cumulative_doses\n"
        "2021-01-01,east,adult,100\n2021-01-02,east,adult,90\n");
    CHECK_THROWS_AS(parse_age_doses(decreasing.path()), ValidationError);
}

TEST_CASE("composition tables and comparison") {
    const auto sample = parse_composition(kFixtures / "fb_composition_weighted.csv", "weighted");
    const auto benchmark = parse_composition(kFixtures / "acs_composition.csv", "benchmark");

    SUBCASE("identical tables give all zeros") {
        const auto diffs = composition_compare(benchmark, benchmark);
        for (const auto& d : diffs) CHECK(d.diff_pp == doctest::Approx(0.0));
    }
    SUBCASE("published gaps reproduce in percentage points") {
        const auto diffs = composition_compare(sample, benchmark);
        double white = 0.0;
        double high_school = 0.0;
        for (const auto& d : diffs) {
            if (d.dimension == "race_ethnicity" && d.category == "white") white = d.diff_pp;
            if (d.dimension == "education" && d.category == "high_school") high_school = d.diff_pp;
        }
        CHECK(white == doctest::Approx(8.0).epsilon(1e-9));
        CHECK(high_school == doctest::Approx(-18.0).epsilon(1e-9));
    }
    SUBCASE("mismatched category sets rejected") {
        CompositionTable trimmed = benchmark;
        trimmed.rows.pop_back();
        CHECK_THROWS_AS(composition_compare(sample, trimmed), SchemaError);
    }
    SUBCASE("shares must sum to about 1 per dimension") {
        TempFile file(
            "dimension,category,share\neducation,a,0.5\neducation,b,0.4\n");
        CHECK_THROWS_AS(parse_composition(file.path(), "raw"), ValidationError);
    }
}

TEST_CASE("parse_outcome_waves") {
    const auto outcomes = parse_outcome_waves(kFixtures / "fb_outcomes.csv");
    CHECK(outcomes.rejected.empty());
    REQUIRE(outcomes.waves.size() == 19);
    for (const auto& ow : outcomes.waves) {
        CHECK(ow.triple.vaccinated + ow.triple.willing + ow.triple.hesitant ==
              doctest::Approx(1.0).epsilon(1e-9));
        CHECK(ow.wave.estimate == ow.triple.vaccinated);
    }

    TempFile bad_sum(
        "survey_id,wave_start,wave_end,n,vaccinated,willing,hesitant,design_effect,cv_w\n"
        "s,2021-01-01,2021-01-07,100,0.5,0.4,0.3,,\n");
    const auto rejected = parse_outcome_waves(bad_sum.path());
    CHECK(rejected.waves.empty());
    CHECK(rejected.rejected.size() == 1);
}
