// surveyq: survey data-quality analytics.
//
// Decomposes survey estimator error into defect correlation, scarcity, and
// difficulty against a benchmark series, computes bias-adjusted effective
// sample sizes, runs response-model simulations, and emits plot-ready CSV or
// JSON tables. All configuration comes from flags (no environment variables),
// and outputs carry provenance comments so results can be tied back to their
// inputs.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "surveyq/benchmark.hpp"
#include "surveyq/core_metrics.hpp"
#include "surveyq/errors.hpp"
#include "surveyq/ingest.hpp"
#include "surveyq/report.hpp"
#include "surveyq/response_models.hpp"
#include "surveyq/scenarios.hpp"

namespace fs = std::filesystem;
using namespace surveyq;

namespace {

struct GlobalOptions {
    std::string format = "csv";
    fs::path out_dir = ".";
    bool lax = false;
};

std::string bool_cell(bool value) { return value ? "true" : "false"; }

std::string join_doubles(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out.push_back(',');
        out += format_real(values[i]);
    }
    return out;
}

fs::path emit(const GlobalOptions& global, const std::string& stem, const OutputTable& table,
              const Provenance& provenance) {
    const bool json = global.format == "json";
    const fs::path path = global.out_dir / (stem + (json ? ".json" : ".csv"));
    atomic_write(path, json ? render_json(table, provenance) : render_csv(table, provenance));
    return path;
}

std::vector<std::string> decomposition_columns() {
    return {"survey_id", "wave_start", "wave_end", "n", "scenario_factor", "benchmark",
            "estimate", "total_error", "ddc", "scarcity", "difficulty", "n_w",
            "design_effect", "z_w", "data_defect_index", "n_eff", "log10_n_eff", "srs_floor"};
}

std::vector<std::string> decomposition_row(const SurveyWave& wave, double factor,
                                           const ErrorDecomposition& d) {
    return {wave.survey_id,
            wave.wave_start.iso(),
            wave.wave_end.iso(),
            std::to_string(wave.n),
            format_real(factor),
            format_proportion(d.benchmark),
            format_proportion(wave.estimate),
            format_real(d.total_error),
            format_real(d.ddc),
            format_real(d.scarcity),
            format_real(d.difficulty),
            format_real(d.n_w),
            format_real(d.design_effect),
            format_real(d.z_w),
            format_real(d.data_defect_index),
            format_real(d.n_eff),
            format_real(d.log10_n_eff),
            bool_cell(d.srs_floor_applied)};
}

int run_decompose(const GlobalOptions& global, const std::vector<fs::path>& wave_paths,
                  const fs::path& benchmark_path, std::int64_t population,
                  std::vector<double> factors) {
    const PopulationFrame frame{population, "target population"};
    const BenchmarkSeries series = parse_benchmark_counts(benchmark_path, frame);

    // Factor 1.0 (the reported benchmark) always comes first.
    factors.insert(factors.begin(), 1.0);

    Provenance provenance = base_provenance();
    provenance.emplace_back("command", "decompose");
    provenance.emplace_back("population", std::to_string(population));
    provenance.emplace_back("factors", join_doubles(factors));
    add_input_digest(provenance, "benchmark", benchmark_path);

    OutputTable table;
    table.columns = decomposition_columns();
    for (const fs::path& path : wave_paths) {
        add_input_digest(provenance, "waves", path);
        const WaveParseResult parsed = parse_waves(path, global.lax);
        for (const RowDiagnostic& diag : parsed.rejected) {
            std::cerr << path.string() << " line " << diag.line << " (" << diag.column
                      << "): " << diag.message << " [row skipped]\n";
        }
        for (const SurveyWave& wave : parsed.waves) {
            const double reported = benchmark_at(series, wave.wave_end);
            const std::vector<double> adjusted = sensitivity_band(reported, factors);
            for (std::size_t i = 0; i < factors.size(); ++i) {
                const ErrorDecomposition d = decompose_wave(wave, frame, adjusted[i]);
                table.rows.push_back(decomposition_row(wave, factors[i], d));
            }
        }
    }

    const fs::path out = emit(global, "decomposition", table, provenance);
    std::cout << "wrote " << out.string() << " (" << table.rows.size() << " rows)\n";
    return 0;
}

int run_neff(const GlobalOptions& global, std::int64_t n, double estimate, double benchmark_value,
             std::int64_t population, std::optional<double> design_effect,
             std::optional<double> cv_w) {
    SurveyWave wave;
    wave.survey_id = "adhoc";
    wave.wave_start = wave.wave_end = Date{2021, 1, 1};
    wave.n = n;
    wave.estimate = estimate;
    wave.design_effect = design_effect;
    wave.cv_w = cv_w;

    const ErrorDecomposition d =
        decompose_wave(wave, {population, "target population"}, benchmark_value);

    Provenance provenance = base_provenance();
    provenance.emplace_back("command", "neff");
    provenance.emplace_back("population", std::to_string(population));

    OutputTable table;
    table.columns = {"n", "design_effect", "n_w", "benchmark", "estimate", "total_error",
                     "ddc", "z_w", "data_defect_index", "n_eff", "log10_n_eff", "srs_floor"};
    table.rows.push_back({std::to_string(n), format_real(d.design_effect), format_real(d.n_w),
                          format_proportion(d.benchmark), format_proportion(estimate),
                          format_real(d.total_error), format_real(d.ddc), format_real(d.z_w),
                          format_real(d.data_defect_index), format_real(d.n_eff),
                          format_real(d.log10_n_eff), bool_cell(d.srs_floor_applied)});

    const fs::path out = emit(global, "neff", table, provenance);
    std::cout << "n_eff=" << format_real(d.n_eff) << " ddc=" << format_real(d.ddc) << "\n"
              << "wrote " << out.string() << "\n";
    return 0;
}

int run_scenario(const GlobalOptions& global, const fs::path& outcomes_path,
                 const fs::path& benchmark_path, std::int64_t population,
                 const std::string& scenario_name, std::optional<std::pair<double, double>> range,
                 int grid_points) {
    const PopulationFrame frame{population, "target population"};
    const BenchmarkSeries series = parse_benchmark_counts(benchmark_path, frame);

    std::vector<ScenarioSpec> specs;
    if (range) {
        specs.push_back({"custom", range->first, range->second, grid_points});
    } else if (scenario_name == "all") {
        specs = {ScenarioSpec::access(), ScenarioSpec::hesitancy(), ScenarioSpec::uptake()};
    } else if (scenario_name == "access") {
        specs = {ScenarioSpec::access()};
    } else if (scenario_name == "hesitancy") {
        specs = {ScenarioSpec::hesitancy()};
    } else if (scenario_name == "uptake") {
        specs = {ScenarioSpec::uptake()};
    } else {
        throw ValidationError("unknown scenario '" + scenario_name + "'");
    }
    for (ScenarioSpec& spec : specs) {
        spec.grid_points = grid_points;
        spec.validate();
    }

    Provenance provenance = base_provenance();
    provenance.emplace_back("command", "scenario");
    provenance.emplace_back("population", std::to_string(population));
    provenance.emplace_back("grid_points", std::to_string(grid_points));
    add_input_digest(provenance, "outcomes", outcomes_path);
    add_input_digest(provenance, "benchmark", benchmark_path);

    const OutcomeParseResult parsed = parse_outcome_waves(outcomes_path, global.lax);
    for (const RowDiagnostic& diag : parsed.rejected) {
        std::cerr << outcomes_path.string() << " line " << diag.line << " (" << diag.column
                  << "): " << diag.message << " [row skipped]\n";
    }

    OutputTable table;
    table.columns = {"wave_end", "scenario", "outcome", "observed",
                     "corrected_low", "corrected_high", "lambda_low", "lambda_high"};
    for (const OutcomeWave& ow : parsed.waves) {
        const double benchmark_value = benchmark_at(series, ow.wave.wave_end);
        const ErrorDecomposition uptake = decompose_wave(ow.wave, frame, benchmark_value);
        for (const ScenarioSpec& spec : specs) {
            ScenarioResult result;
            try {
                result = scenario_band(ow.triple, uptake.ddc, spec, uptake.n_w, population);
            } catch (const InfeasibleScenarioError& e) {
                throw InfeasibleScenarioError(ow.wave.survey_id + " " + ow.wave.wave_end.iso() +
                                              ": " + e.what());
            }
            const auto row = [&](const char* outcome, double observed, const Band& band) {
                table.rows.push_back({ow.wave.wave_end.iso(), spec.name, outcome,
                                      format_proportion(observed), format_proportion(band.low),
                                      format_proportion(band.high), format_real(spec.lambda_low),
                                      format_real(spec.lambda_high)});
            };
            row("hesitant", ow.triple.hesitant, result.corrected_hesitancy);
            row("willing", ow.triple.willing, result.corrected_willingness);
        }
    }

    const fs::path out = emit(global, "scenarios", table, provenance);
    std::cout << "wrote " << out.string() << " (" << table.rows.size() << " rows)\n";
    return 0;
}

int run_simulate_logit(const GlobalOptions& global, double alpha, double beta, double mu,
                       std::int64_t population, int replications, std::uint64_t seed) {
    const LogitResponseModel model{alpha, beta, mu};
    const SimulationSummary summary =
        simulate_logit_population(model, population, seed, replications);
    if (summary.redraw_warning) {
        std::cerr << "warning: " << summary.redraws
                  << " degenerate replications redrawn (more than 1%)\n";
    }

    Provenance provenance = base_provenance();
    provenance.emplace_back("command", "simulate-logit");
    provenance.emplace_back("seed", std::to_string(seed));

    OutputTable table;
    table.columns = {"alpha", "beta", "mu", "N", "replications", "seed",
                     "mean_f", "sd_f", "mean_rho", "sd_rho", "mean_error", "sd_error",
                     "f_limit", "rho_limit", "redraws", "redraw_warning"};
    table.rows.push_back({format_real(alpha), format_real(beta), format_real(mu),
                          std::to_string(population), std::to_string(replications),
                          std::to_string(seed), format_real(summary.mean_f),
                          format_real(summary.sd_f), format_real(summary.mean_rho),
                          format_real(summary.sd_rho), format_real(summary.mean_error),
                          format_real(summary.sd_error), format_real(summary.limits.f_limit),
                          format_real(summary.limits.rho_limit), std::to_string(summary.redraws),
                          bool_cell(summary.redraw_warning)});

    const fs::path out = emit(global, "logit_simulation", table, provenance);
    std::cout << "wrote " << out.string() << "\n";
    return 0;
}

int run_simulate_heckman(const GlobalOptions& global, double r, double z, std::int64_t draws,
                         std::uint64_t seed, bool antithetic) {
    const HeckmanParams params{r, z};
    const double analytic = heckman_ddc(params);
    const double estimate = heckman_oracle(params, draws, seed, antithetic);

    Provenance provenance = base_provenance();
    provenance.emplace_back("command", "simulate-heckman");
    provenance.emplace_back("seed", std::to_string(seed));

    OutputTable table;
    table.columns = {"r", "z", "draws", "seed", "antithetic", "estimate", "analytic",
                     "abs_difference"};
    table.rows.push_back({format_real(r), format_real(z), std::to_string(draws),
                          std::to_string(seed), bool_cell(antithetic), format_real(estimate),
                          format_real(analytic), format_real(std::abs(estimate - analytic))});

    const fs::path out = emit(global, "heckman_simulation", table, provenance);
    std::cout << "wrote " << out.string() << "\n";
    return 0;
}

int run_impute_benchmark(const GlobalOptions& global, const fs::path& ages_path,
                         const fs::path& totals_path, std::int64_t population,
                         const std::string& excluded) {
    const PopulationFrame frame{population, "target population"};
    const BenchmarkSeries totals = parse_benchmark_counts(totals_path, frame);
    const AgeDoseTable ages = parse_age_doses(ages_path);
    const BenchmarkSeries imputed = impute_adult_series(ages, totals, excluded);

    Provenance provenance = base_provenance();
    provenance.emplace_back("command", "impute-benchmark");
    provenance.emplace_back("excluded", excluded);
    provenance.emplace_back("population", std::to_string(population));
    add_input_digest(provenance, "ages", ages_path);
    add_input_digest(provenance, "totals", totals_path);

    // Same schema as a benchmark input, so the output can feed `decompose`.
    OutputTable table;
    table.columns = {"date", "cumulative_count"};
    for (const BenchmarkEntry& entry : imputed.entries) {
        table.rows.push_back({entry.date.iso(), format_count(entry.cumulative_count)});
    }

    const fs::path out = emit(global, "imputed_benchmark", table, provenance);
    std::cout << "wrote " << out.string() << " (" << table.rows.size() << " rows)\n";
    return 0;
}

int run_sensitivity(const GlobalOptions& global, std::optional<double> value,
                    const fs::path& benchmark_path, std::int64_t population,
                    const std::vector<double>& factors) {
    Provenance provenance = base_provenance();
    provenance.emplace_back("command", "sensitivity");
    provenance.emplace_back("factors", join_doubles(factors));

    OutputTable table;
    if (value) {
        table.columns = {"factor", "value"};
        const std::vector<double> band = sensitivity_band(*value, factors);
        for (std::size_t i = 0; i < factors.size(); ++i) {
            table.rows.push_back({format_real(factors[i]), format_proportion(band[i])});
        }
    } else {
        if (benchmark_path.empty()) {
            throw ValidationError("sensitivity needs either --value or --benchmark");
        }
        if (population < 1) {
            throw ValidationError("--population is required with --benchmark");
        }
        add_input_digest(provenance, "benchmark", benchmark_path);
        const BenchmarkSeries series =
            parse_benchmark_counts(benchmark_path, {population, "target population"});
        table.columns = {"date", "factor", "proportion"};
        for (const BenchmarkEntry& entry : series.entries) {
            const double proportion = entry.cumulative_count / static_cast<double>(population);
            const std::vector<double> band = sensitivity_band(proportion, factors);
            for (std::size_t i = 0; i < factors.size(); ++i) {
                table.rows.push_back(
                    {entry.date.iso(), format_real(factors[i]), format_proportion(band[i])});
            }
        }
    }

    const fs::path out = emit(global, "sensitivity", table, provenance);
    std::cout << "wrote " << out.string() << " (" << table.rows.size() << " rows)\n";
    return 0;
}

int run_compare_composition(const GlobalOptions& global, const fs::path& sample_path,
                            const fs::path& benchmark_path) {
    const CompositionTable sample = parse_composition(sample_path, "sample");
    const CompositionTable benchmark = parse_composition(benchmark_path, "benchmark");
    const std::vector<CompositionDiff> diffs = composition_compare(sample, benchmark);

    Provenance provenance = base_provenance();
    provenance.emplace_back("command", "compare-composition");
    add_input_digest(provenance, "sample", sample_path);
    add_input_digest(provenance, "benchmark", benchmark_path);

    OutputTable table;
    table.columns = {"dimension", "category", "sample_share", "benchmark_share", "diff_pp"};
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        const double benchmark_share = sample.rows[i].share - diffs[i].diff_pp / 100.0;
        table.rows.push_back({diffs[i].dimension, diffs[i].category,
                              format_proportion(sample.rows[i].share),
                              format_proportion(benchmark_share), format_real(diffs[i].diff_pp)});
    }

    const fs::path out = emit(global, "composition_diff", table, provenance);
    std::cout << "wrote " << out.string() << " (" << table.rows.size() << " rows)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"surveyq: decompose survey error into data defect, scarcity, and difficulty"};
    app.require_subcommand(1);

    GlobalOptions global;
    app.add_option("--format", global.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--out", global.out_dir, "Output directory")->capture_default_str();
    app.add_flag("--lax", global.lax, "Tolerate extra columns in input files");

    const std::vector<double> default_factors{0.9, 0.95, 1.05, 1.1};

    // decompose
    auto* decompose = app.add_subcommand(
        "decompose", "Per-wave error decomposition against a benchmark series");
    std::vector<fs::path> wave_paths;
    fs::path benchmark_path;
    std::int64_t population = 0;
    std::vector<double> factors = default_factors;
    decompose->add_option("--waves", wave_paths, "Wave CSV file(s)")
        ->required()
        ->check(CLI::ExistingFile);
    decompose->add_option("--benchmark", benchmark_path, "Benchmark counts CSV")
        ->required()
        ->check(CLI::ExistingFile);
    decompose->add_option("--population", population, "Target population size")->required();
    decompose->add_option("--factors", factors, "Benchmark sensitivity factors")
        ->delimiter(',')
        ->capture_default_str();

    // neff
    auto* neff = app.add_subcommand("neff", "One-off effective sample size calculation");
    std::int64_t neff_n = 0;
    double neff_estimate = 0.0;
    double neff_benchmark = 0.0;
    std::int64_t neff_population = 0;
    double neff_deff = 0.0;
    double neff_cv = -1.0;
    neff->add_option("--n", neff_n, "Sample size")->required();
    neff->add_option("--estimate", neff_estimate, "Weighted estimate")->required();
    neff->add_option("--benchmark-value", neff_benchmark, "Benchmark proportion")->required();
    neff->add_option("--population", neff_population, "Target population size")->required();
    neff->add_option("--design-effect", neff_deff, "Design effect");
    neff->add_option("--cv-w", neff_cv, "Coefficient of variation of mean-1 weights");

    // scenario
    auto* scenario = app.add_subcommand(
        "scenario", "Correct hesitancy/willingness under postulated ddc allocations");
    fs::path outcomes_path;
    fs::path scenario_benchmark;
    std::int64_t scenario_population = 0;
    std::string scenario_name = "all";
    std::vector<double> lambda_range;
    int grid_points = 11;
    scenario->add_option("--outcomes", outcomes_path, "Outcome triple CSV")
        ->required()
        ->check(CLI::ExistingFile);
    scenario->add_option("--benchmark", scenario_benchmark, "Benchmark counts CSV")
        ->required()
        ->check(CLI::ExistingFile);
    scenario->add_option("--population", scenario_population, "Target population size")
        ->required();
    scenario->add_option("--scenario", scenario_name, "access, hesitancy, uptake, or all")
        ->capture_default_str();
    scenario->add_option("--lambda-range", lambda_range, "Custom lambda range lo,hi")
        ->delimiter(',')
        ->expected(2);
    scenario->add_option("--grid-points", grid_points, "Lambda grid size")->capture_default_str();

    // simulate-logit
    auto* sim_logit =
        app.add_subcommand("simulate-logit", "Finite-population logit response simulation");
    double alpha = 0.0;
    double beta = 0.0;
    double mu = 0.5;
    std::int64_t sim_population = 0;
    int replications = 0;
    std::uint64_t seed = 0;
    sim_logit->add_option("--alpha", alpha, "Baseline log-odds of response")->required();
    sim_logit->add_option("--beta", beta, "Log-odds shift per unit outcome")->required();
    sim_logit->add_option("--mu", mu, "Population outcome mean")->required();
    sim_logit->add_option("--N", sim_population, "Population size")->required();
    sim_logit->add_option("--reps", replications, "Replications")->required();
    sim_logit->add_option("--seed", seed, "RNG seed")->required();

    // simulate-heckman
    auto* sim_heckman =
        app.add_subcommand("simulate-heckman", "Monte Carlo check of the selection-model ddc");
    double heckman_r = 0.0;
    double heckman_z = 0.0;
    std::int64_t draws = 0;
    std::uint64_t heckman_seed = 0;
    bool antithetic = false;
    sim_heckman->add_option("--r", heckman_r, "Latent error correlation")->required();
    sim_heckman->add_option("--z", heckman_z, "Standardized selection mean")->required();
    sim_heckman->add_option("--draws", draws, "Monte Carlo draws")->required();
    sim_heckman->add_option("--seed", heckman_seed, "RNG seed")->required();
    sim_heckman->add_flag("--antithetic", antithetic, "Use antithetic pairs");

    // impute-benchmark
    auto* impute = app.add_subcommand(
        "impute-benchmark", "Scale totals by the adult share from age-split dose data");
    fs::path ages_path;
    fs::path totals_path;
    std::int64_t impute_population = 0;
    std::string excluded;
    impute->add_option("--ages", ages_path, "Age-split dose CSV")
        ->required()
        ->check(CLI::ExistingFile);
    impute->add_option("--totals", totals_path, "Totals CSV")
        ->required()
        ->check(CLI::ExistingFile);
    impute->add_option("--population", impute_population, "Target population size")->required();
    impute->add_option("--exclude", excluded, "Jurisdiction without age-split reporting")
        ->required();

    // sensitivity
    auto* sensitivity = app.add_subcommand(
        "sensitivity", "Multiplicative perturbations of a proportion or a whole series");
    double sens_value = -1.0;
    fs::path sens_benchmark;
    std::int64_t sens_population = 0;
    std::vector<double> sens_factors = default_factors;
    auto* value_opt = sensitivity->add_option("--value", sens_value, "Single proportion");
    sensitivity->add_option("--benchmark", sens_benchmark, "Benchmark counts CSV")
        ->excludes(value_opt)
        ->check(CLI::ExistingFile);
    sensitivity->add_option("--population", sens_population, "Target population size");
    sensitivity->add_option("--factors", sens_factors, "Sensitivity factors")
        ->delimiter(',')
        ->capture_default_str();

    // compare-composition
    auto* compare = app.add_subcommand(
        "compare-composition", "Sample composition vs. a population benchmark");
    fs::path sample_path;
    fs::path comp_benchmark;
    compare->add_option("--sample", sample_path, "Sample composition CSV")
        ->required()
        ->check(CLI::ExistingFile);
    compare->add_option("--benchmark", comp_benchmark, "Benchmark composition CSV")
        ->required()
        ->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*decompose) {
            return run_decompose(global, wave_paths, benchmark_path, population, factors);
        }
        if (*neff) {
            std::optional<double> deff;
            if (neff->count("--design-effect")) deff = neff_deff;
            std::optional<double> cv;
            if (neff->count("--cv-w")) cv = neff_cv;
            return run_neff(global, neff_n, neff_estimate, neff_benchmark, neff_population, deff,
                            cv);
        }
        if (*scenario) {
            std::optional<std::pair<double, double>> range;
            if (!lambda_range.empty()) {
                range = std::make_pair(lambda_range[0], lambda_range[1]);
            }
            return run_scenario(global, outcomes_path, scenario_benchmark, scenario_population,
                                scenario_name, range, grid_points);
        }
        if (*sim_logit) {
            return run_simulate_logit(global, alpha, beta, mu, sim_population, replications, seed);
        }
        if (*sim_heckman) {
            return run_simulate_heckman(global, heckman_r, heckman_z, draws, heckman_seed,
                                        antithetic);
        }
        if (*impute) {
            return run_impute_benchmark(global, ages_path, totals_path, impute_population,
                                        excluded);
        }
        if (*sensitivity) {
            std::optional<double> value;
            if (sensitivity->count("--value")) value = sens_value;
            return run_sensitivity(global, value, sens_benchmark, sens_population, sens_factors);
        }
        if (*compare) {
            return run_compare_composition(global, sample_path, comp_benchmark);
        }
    } catch (const ComputationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
