#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace surveyq {

/// Logistic response propensity: logit Pr(R=1|Y) = alpha + beta * Y, for a
/// binary outcome whose population mean tends to mu.
struct LogitResponseModel {
    double alpha = 0.0;
    double beta = 0.0;
    double mu = 0.5;

    void validate() const;
};

struct LogitLimits {
    double f_limit = 0.0;    // limiting response fraction
    double rho_limit = 0.0;  // limiting data defect correlation
};

/// Large-N limits of the response fraction and the ddc:
///   f   -> (1-mu) s(alpha) + mu s(alpha+beta)
///   rho -> (s(alpha+beta) - s(alpha)) sqrt(mu(1-mu)) / sqrt(f(1-f))
/// with s the logistic function. rho is zero exactly when beta is.
LogitLimits logit_limits(const LogitResponseModel& model);

struct BiasMse {
    double bias = 0.0;
    double mse = 0.0;
};

/// Asymptotic bias of the respondent mean plus its MSE at population size N:
/// bias = rho * sqrt((1-f)/f) * sigma_Y, and
/// mse  = bias^2 + ((1-f)/(f N)) sigma_Y^2 (sampling variance of a mean of
/// n = fN draws with finite-population correction).
BiasMse logit_bias_mse(const LogitResponseModel& model, std::int64_t population_size);

struct SimulationSummary {
    std::int64_t population_size = 0;
    int replications = 0;
    std::uint64_t seed = 0;
    double mean_f = 0.0;
    double sd_f = 0.0;
    double mean_rho = 0.0;
    double sd_rho = 0.0;
    double mean_error = 0.0;
    double sd_error = 0.0;
    std::int64_t redraws = 0;      // degenerate replications that were redrawn
    bool redraw_warning = false;   // more than 1% of draws were redrawn
    LogitLimits limits;            // analytic limits, for side-by-side output
};

/// Draws Y_i ~ Bernoulli(mu) and R_i ~ Bernoulli(s(alpha + beta Y_i)) per
/// unit, computes the empirical response fraction, ddc, and error per
/// replication, and summarizes across replications. One RNG stream per
/// replication; bit-identical for a given seed.
SimulationSummary simulate_logit_population(const LogitResponseModel& model,
                                            std::int64_t population_size, std::uint64_t seed,
                                            int replications);

/// Latent bivariate-normal selection: outcome error and selection error have
/// correlation r, and a unit is recorded when its standardized selection
/// value reaches z.
struct HeckmanParams {
    double r = 0.0;
    double z = 0.0;

    void validate() const;
};

/// Closed-form ddc under the selection model:
///   rho = r * phi(z) / sqrt(Phi(-z) * (1 - Phi(-z)))
double heckman_ddc(const HeckmanParams& params);

/// Monte Carlo check of heckman_ddc: sample correlation between the outcome
/// error and the selection indicator over `draws` bivariate normal draws.
/// With antithetic=true, draws are generated in mirrored pairs, halving the
/// variance for the same draw count.
double heckman_oracle(const HeckmanParams& params, std::int64_t draws, std::uint64_t seed,
                      bool antithetic = false);

/// One stage of a multi-stage selection process: `population` units were
/// eligible, `realized` made it into the next stage.
struct SamplingStage {
    std::string name;
    std::int64_t population = 0;
    std::int64_t realized = 0;
};

struct DominatingPopulation {
    std::int64_t dps = 0;                 // population of the first biased stage
    std::vector<double> stage_fractions;  // realized/population per stage
    double overall_fraction = 1.0;        // product of stage fractions
};

/// Stages must chain (each stage's population equals the previous stage's
/// realized count). `first_biased_stage` is 1-based, matching how stages are
/// numbered in survey documentation.
DominatingPopulation dominating_population(std::span<const SamplingStage> stages,
                                           std::size_t first_biased_stage);

}  // namespace surveyq
