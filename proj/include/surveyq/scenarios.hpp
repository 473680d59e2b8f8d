#pragma once

#include <cstdint>
#include <string>

namespace surveyq {

/// Weighted estimates of the trinomial outcome: vaccinated, willing,
/// hesitant. The three must sum to 1.
struct OutcomeTriple {
    double vaccinated = 0.0;
    double willing = 0.0;
    double hesitant = 0.0;

    void validate() const;
};

/// A named lambda range describing how the uptake defect is assumed to split
/// between hesitancy and willingness.
struct ScenarioSpec {
    std::string name;
    double lambda_low = 0.0;
    double lambda_high = 0.0;
    int grid_points = 11;

    void validate() const;

    // Defaults mirror the three postulated mechanisms: bias concentrated in
    // the willing-but-unvaccinated population (access), in the hesitant
    // population (hesitancy), or split roughly evenly (uptake).
    static ScenarioSpec access() { return {"access", 1.0, 1.2, 11}; }
    static ScenarioSpec hesitancy() { return {"hesitancy", -1.2, -1.0, 11}; }
    static ScenarioSpec uptake() { return {"uptake", 0.4, 0.6, 11}; }
};

struct Band {
    double low = 0.0;
    double high = 0.0;
};

struct ScenarioResult {
    Band corrected_hesitancy;
    Band corrected_willingness;
    double max_residual = 0.0;  // worst back-substitution residual over the grid
};

struct DdcAllocation {
    double rho_h = 0.0;
    double rho_w = 0.0;
};

/// Splits the uptake ddc across hesitancy and willingness:
///   rho_h = -(1 - lambda) * rho_v,  rho_w = -lambda * rho_v
/// with rho_w computed as the exact complement so the three always sum to 0.
DdcAllocation allocate_ddc(double rho_v, double lambda);

/// Inverts the weighted identity for the population mean X given a postulated
/// ddc: with c = rho * sqrt((N - n_w)/n_w), solves
///   (c^2 + 1) X^2 - (2*observed + c^2) X + observed^2 = 0
/// and returns the root on the side implied by the sign of rho (over-
/// represented outcomes have true means below the observed value). The
/// signed pre-squaring equation observed - X = c * sqrt(X(1-X)) holds at the
/// returned root.
double solve_population_mean(double observed, double rho, double n_w, std::int64_t population_size);

/// Same root through the Wilson score form: the endpoint of a Wilson interval
/// with quantile z and a finite-population correction (1 - f). Kept as an
/// independent algebraic route for cross-checking solve_population_mean.
double wilson_equivalent(double observed, double z, double n_w, double sampling_fraction);

/// Sweeps the lambda grid, correcting hesitancy and willingness at each point
/// under the equal-variance approximation, and returns min/max bands.
ScenarioResult scenario_band(const OutcomeTriple& triple, double rho_v, const ScenarioSpec& spec,
                             double n_w, std::int64_t population_size);

}  // namespace surveyq
