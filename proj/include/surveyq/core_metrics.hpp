#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "surveyq/date.hpp"

namespace surveyq {

/// Summary statistics for one survey wave: respondent count, the weighted
/// estimate, and whatever the publisher reports about weighting (a design
/// effect, a weight CV, or neither).
struct SurveyWave {
    std::string survey_id;
    Date wave_start;
    Date wave_end;
    std::int64_t n = 0;
    double estimate = 0.0;
    std::optional<double> se;
    std::optional<double> design_effect;
    std::optional<double> cv_w;

    /// Throws ValidationError if any field invariant is violated.
    void validate() const;

    /// Design effect used downstream: reported D_e, else 1 + cv_w^2, else 1.
    /// A wave reporting only se and estimate is treated as unweighted; we do
    /// not back D_e out of the standard error.
    double resolved_design_effect() const;
};

struct PopulationFrame {
    std::int64_t size = 0;
    std::string label;
};

/// The multiplicative error decomposition of one wave, plus the derived
/// quality indices and effective sample sizes.
///
///   total_error = ddc * scarcity * difficulty
///
/// All moments follow the population convention (denominator N), which is
/// what makes the identity exact rather than approximate.
struct ErrorDecomposition {
    Date wave_end;
    double benchmark = 0.0;          // population proportion the wave is judged against
    double total_error = 0.0;        // estimate - benchmark
    double ddc = 0.0;                // data defect correlation
    double scarcity = 0.0;           // sqrt((N - n_w) / n_w)
    double difficulty = 0.0;         // sigma_Y = sqrt(benchmark * (1 - benchmark))
    double n_w = 0.0;                // Kish effective sample size, n / D_e
    double design_effect = 1.0;
    double z_w = 0.0;                // standardized error, ddc * sqrt(N)
    double data_defect_index = 0.0;  // z_w^2 / N == ddc^2
    double n_eff = 0.0;              // bias-adjusted effective sample size
    double log10_n_eff = 0.0;
    bool srs_floor_applied = false;  // ddc^2 was 0 and the SRS floor 1/(N-1) was used
};

/// Fully enumerated finite population: outcome per unit, recording indicator
/// per unit, and optionally one positive weight per recorded unit (in unit
/// order). Serves as the brute-force oracle for the decomposition identity.
struct FinitePopulation {
    std::vector<double> y;
    std::vector<int> r;       // 0/1 per unit
    std::vector<double> w;    // empty means unit weights; else one per respondent

    std::size_t size() const { return y.size(); }
    std::int64_t respondent_count() const;

    void validate() const;

    /// Weighted recording indicator R_w = w * R over all units.
    std::vector<double> weighted_indicator() const;

    double population_mean() const;
    double population_sigma() const;
    /// Unweighted respondent mean.
    double sample_mean() const;
    /// Weight-adjusted respondent mean (equals sample_mean for unit weights).
    double weighted_mean() const;
};

struct KishResult {
    double n_w = 0.0;
    double design_effect = 1.0;
};

struct BiasAdjustedNeff {
    double n_eff = 0.0;
    bool srs_floor_applied = false;
};

/// Decomposes a wave's error against `benchmark_value`, recovering the ddc
/// from the observed error and attaching design effect, standardized error,
/// defect index, and both effective sample sizes.
ErrorDecomposition decompose_wave(const SurveyWave& wave, const PopulationFrame& frame,
                                  double benchmark_value);

/// Recovers the ddc from an observed total error:
///   rho = total_error / (sqrt((N - n_w) / n_w) * sigma)
/// which equals Z_w / sqrt(N) for Z_w = total_error / (sqrt((1-f_w)/n_w) * sigma).
double ddc_from_error(double total_error, double n_w, std::int64_t population_size, double sigma);

/// Classical weighting-effective sample size from respondent weights.
/// Weights are rescaled to mean 1, CV^2 uses denominator n, and
/// n_w = n / (1 + CV^2), D_e = 1 + CV^2.
KishResult kish_effective_n(std::span<const double> weights);

/// Same, from a reported design effect.
KishResult kish_effective_n(std::int64_t n, double design_effect);

/// Size of a simple random sample with the same MSE as the observed estimate:
///   n_eff = (n_w / (N - n_w)) / rho_sq
/// rho_sq == 0 is replaced by the SRS expectation 1/(N-1) and flagged.
BiasAdjustedNeff bias_adjusted_neff(double rho_sq, double n_w, std::int64_t population_size);

/// Brute-force data defect correlation: Pearson correlation of (Y, R_w) over
/// all N units with denominator-N moments.
double ddc_population_oracle(const FinitePopulation& pop);

/// Kendall rank correlation, tau-b convention for ties.
double kendall_tau(std::span<const double> ranking_a, std::span<const double> ranking_b);

}  // namespace surveyq
