#include "surveyq/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "surveyq/errors.hpp"

namespace surveyq {

namespace {

constexpr double kTripleSumTol = 1e-9;
constexpr double kResidualTol = 1e-10;

double scarcity_factor(double n_w, double population) {
    return std::sqrt((population - n_w) / n_w);
}

// Root of the squared identity consistent with the sign of c. The
// discriminant (2m + c^2)^2 - 4(c^2+1)m^2 factors exactly as
// c^2 (c^2 + 4m(1-m)), which avoids the catastrophic cancellation the
// textbook form suffers for small |c|.
double solve_with_coefficient(double observed, double c) {
    if (c == 0.0) return observed;
    const double a = c * c + 1.0;
    const double b = -(2.0 * observed + c * c);
    const double q = observed * observed;
    const double disc = c * c * (c * c + 4.0 * observed * (1.0 - observed));
    if (disc < 0.0) {
        throw InfeasibleScenarioError("discriminant negative: |rho| too large for observed value");
    }
    const double sqrt_disc = std::sqrt(disc);
    // b < 0 always here, so -b + sqrt_disc is cancellation-free.
    const double t = 0.5 * (-b + sqrt_disc);
    const double root_large = t / a;
    const double root_small = q / t;
    return c > 0.0 ? root_small : root_large;
}

double signed_residual(double observed, double root, double c) {
    return (observed - root) - c * std::sqrt(root * (1.0 - root));
}

}  // namespace

void OutcomeTriple::validate() const {
    for (double v : {vaccinated, willing, hesitant}) {
        if (v < 0.0 || v > 1.0) {
            throw ValidationError("outcome proportions must lie in [0,1]");
        }
    }
    if (std::abs(vaccinated + willing + hesitant - 1.0) > kTripleSumTol) {
        throw ValidationError("vaccinated + willing + hesitant must sum to 1");
    }
}

void ScenarioSpec::validate() const {
    if (lambda_low > lambda_high) {
        throw ValidationError("scenario lambda_low exceeds lambda_high");
    }
    if (grid_points < 1) {
        throw ValidationError("scenario grid needs at least one point");
    }
}

DdcAllocation allocate_ddc(double rho_v, double lambda) {
    DdcAllocation out;
    out.rho_h = -(1.0 - lambda) * rho_v;
    // Exact complement rather than -lambda * rho_v, so that
    // rho_v + rho_h + rho_w is identically zero in floating point.
    out.rho_w = -(rho_v + out.rho_h);
    return out;
}

double solve_population_mean(double observed, double rho, double n_w,
                             std::int64_t population_size) {
    const double population = static_cast<double>(population_size);
    if (!(observed > 0.0) || !(observed < 1.0)) {
        throw ValidationError("observed proportion must lie strictly inside (0,1)");
    }
    if (!(n_w > 0.0) || n_w >= population) {
        throw ValidationError("solve_population_mean requires 0 < n_w < N");
    }
    const double c = rho * scarcity_factor(n_w, population);
    const double root = solve_with_coefficient(observed, c);
    const double residual = signed_residual(observed, root, c);
    if (std::abs(residual) > kResidualTol) {
        throw InfeasibleScenarioError("root fails the signed identity; scenario infeasible");
    }
    return root;
}

double wilson_equivalent(double observed, double z, double n_w, double sampling_fraction) {
    if (!(observed > 0.0) || !(observed < 1.0)) {
        throw ValidationError("observed proportion must lie strictly inside (0,1)");
    }
    if (!(n_w > 0.0) || sampling_fraction < 0.0 || sampling_fraction >= 1.0) {
        throw ValidationError("wilson_equivalent requires n_w > 0 and f in [0,1)");
    }
    if (z == 0.0) return observed;

    // Wilson score endpoint with finite-population correction:
    // t^2 = z^2 (1-f)/n_w, center (m + t^2/2)/(1+t^2),
    // half-width |t| sqrt(m(1-m) + t^2/4)/(1+t^2).
    const double t_sq = z * z * (1.0 - sampling_fraction) / n_w;
    const double center = (observed + 0.5 * t_sq) / (1.0 + t_sq);
    const double inside = observed * (1.0 - observed) + 0.25 * t_sq;
    if (inside < 0.0) {
        throw InfeasibleScenarioError("wilson_equivalent: negative radicand");
    }
    const double half = std::sqrt(t_sq) * std::sqrt(inside) / (1.0 + t_sq);
    return z > 0.0 ? center - half : center + half;
}

ScenarioResult scenario_band(const OutcomeTriple& triple, double rho_v, const ScenarioSpec& spec,
                             double n_w, std::int64_t population_size) {
    triple.validate();
    spec.validate();

    ScenarioResult out;
    out.corrected_hesitancy = {std::numeric_limits<double>::infinity(),
                               -std::numeric_limits<double>::infinity()};
    out.corrected_willingness = {std::numeric_limits<double>::infinity(),
                                 -std::numeric_limits<double>::infinity()};

    const double population = static_cast<double>(population_size);
    const double scarcity = scarcity_factor(n_w, population);
    const int points = spec.grid_points;
    for (int i = 0; i < points; ++i) {
        const double lambda =
            points == 1 ? spec.lambda_low
                        : spec.lambda_low + (spec.lambda_high - spec.lambda_low) * i / (points - 1);
        const DdcAllocation alloc = allocate_ddc(rho_v, lambda);
        double corrected_h = 0.0;
        double corrected_w = 0.0;
        try {
            corrected_h = rho_v == 0.0 || alloc.rho_h == 0.0
                              ? triple.hesitant
                              : solve_population_mean(triple.hesitant, alloc.rho_h, n_w,
                                                      population_size);
            corrected_w = rho_v == 0.0 || alloc.rho_w == 0.0
                              ? triple.willing
                              : solve_population_mean(triple.willing, alloc.rho_w, n_w,
                                                      population_size);
        } catch (const InfeasibleScenarioError& e) {
            throw InfeasibleScenarioError(spec.name + " scenario infeasible at lambda=" +
                                          std::to_string(lambda) + ": " + e.what());
        }

        const double res_h =
            std::abs((triple.hesitant - corrected_h) -
                     alloc.rho_h * scarcity * std::sqrt(corrected_h * (1.0 - corrected_h)));
        const double res_w =
            std::abs((triple.willing - corrected_w) -
                     alloc.rho_w * scarcity * std::sqrt(corrected_w * (1.0 - corrected_w)));
        out.max_residual = std::max({out.max_residual, res_h, res_w});

        out.corrected_hesitancy.low = std::min(out.corrected_hesitancy.low, corrected_h);
        out.corrected_hesitancy.high = std::max(out.corrected_hesitancy.high, corrected_h);
        out.corrected_willingness.low = std::min(out.corrected_willingness.low, corrected_w);
        out.corrected_willingness.high = std::max(out.corrected_willingness.high, corrected_w);
    }
    return out;
}

}  // namespace surveyq
