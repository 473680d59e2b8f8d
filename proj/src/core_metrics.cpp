#include "surveyq/core_metrics.hpp"

#include <algorithm>
#include <cmath>

#include "surveyq/errors.hpp"
#include "surveyq/stats.hpp"

namespace surveyq {

namespace {

constexpr double kDesignEffectConsistencyTol = 1e-9;

}  // namespace

void SurveyWave::validate() const {
    if (survey_id.empty()) {
        throw ValidationError("wave has empty survey_id");
    }
    if (wave_start > wave_end) {
        throw ValidationError(survey_id + ": wave_start " + wave_start.iso() +
                              " is after wave_end " + wave_end.iso());
    }
    if (n < 1) {
        throw ValidationError(survey_id + " " + wave_end.iso() + ": n must be >= 1");
    }
    if (estimate < 0.0 || estimate > 1.0) {
        throw ValidationError(survey_id + " " + wave_end.iso() + ": estimate outside [0,1]");
    }
    if (se && *se < 0.0) {
        throw ValidationError(survey_id + " " + wave_end.iso() + ": negative se");
    }
    if (design_effect && *design_effect < 1.0) {
        throw ValidationError(survey_id + " " + wave_end.iso() + ": design_effect below 1");
    }
    if (cv_w && *cv_w < 0.0) {
        throw ValidationError(survey_id + " " + wave_end.iso() + ": negative cv_w");
    }
    if (design_effect && cv_w &&
        std::abs(*design_effect - (1.0 + *cv_w * *cv_w)) > kDesignEffectConsistencyTol) {
        throw ValidationError(survey_id + " " + wave_end.iso() +
                              ": design_effect inconsistent with 1 + cv_w^2");
    }
}

double SurveyWave::resolved_design_effect() const {
    if (design_effect) return *design_effect;
    if (cv_w) return 1.0 + *cv_w * *cv_w;
    return 1.0;
}

std::int64_t FinitePopulation::respondent_count() const {
    std::int64_t count = 0;
    for (int ri : r) count += ri;
    return count;
}

void FinitePopulation::validate() const {
    if (y.empty()) {
        throw ValidationError("finite population is empty");
    }
    if (r.size() != y.size()) {
        throw ValidationError("finite population arrays differ in length");
    }
    for (int ri : r) {
        if (ri != 0 && ri != 1) {
            throw ValidationError("recording indicator must be 0 or 1");
        }
    }
    const std::int64_t respondents = respondent_count();
    if (respondents == 0 || respondents == static_cast<std::int64_t>(y.size())) {
        throw UndefinedCorrelationError(
            "correlation requires at least one respondent and one nonrespondent");
    }
    if (!w.empty()) {
        if (w.size() != static_cast<std::size_t>(respondents)) {
            throw ValidationError("weights must have one entry per respondent");
        }
        for (double wi : w) {
            if (!(wi > 0.0)) throw InvalidWeightsError("weights must be strictly positive");
        }
    }
}

std::vector<double> FinitePopulation::weighted_indicator() const {
    std::vector<double> rw(y.size(), 0.0);
    std::size_t next_weight = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (r[i] == 1) {
            rw[i] = w.empty() ? 1.0 : w[next_weight++];
        }
    }
    return rw;
}

double FinitePopulation::population_mean() const {
    return mean(y);
}

double FinitePopulation::population_sigma() const {
    return std::sqrt(population_variance(y));
}

double FinitePopulation::sample_mean() const {
    KahanSum s;
    std::int64_t count = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (r[i] == 1) {
            s.add(y[i]);
            ++count;
        }
    }
    return s.value() / static_cast<double>(count);
}

double FinitePopulation::weighted_mean() const {
    if (w.empty()) return sample_mean();
    KahanSum num;
    KahanSum den;
    std::size_t next_weight = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (r[i] == 1) {
            const double wi = w[next_weight++];
            num.add(wi * y[i]);
            den.add(wi);
        }
    }
    return num.value() / den.value();
}

ErrorDecomposition decompose_wave(const SurveyWave& wave, const PopulationFrame& frame,
                                  double benchmark_value) {
    wave.validate();
    if (frame.size < 1) {
        throw ValidationError("population frame size must be positive");
    }
    if (wave.n > frame.size) {
        throw SampleExceedsPopulationError(wave.survey_id + " " + wave.wave_end.iso() +
                                           ": n exceeds population size");
    }
    if (benchmark_value < 0.0 || benchmark_value > 1.0) {
        throw ValidationError("benchmark value outside [0,1]");
    }

    ErrorDecomposition out;
    out.wave_end = wave.wave_end;
    out.benchmark = benchmark_value;
    out.total_error = wave.estimate - benchmark_value;
    out.design_effect = wave.resolved_design_effect();
    out.n_w = static_cast<double>(wave.n) / out.design_effect;
    out.difficulty = std::sqrt(benchmark_value * (1.0 - benchmark_value));

    const double population = static_cast<double>(frame.size);
    if (out.n_w >= population) {
        throw SampleExceedsPopulationError(wave.survey_id + " " + wave.wave_end.iso() +
                                           ": effective sample size reaches population size");
    }
    out.scarcity = std::sqrt((population - out.n_w) / out.n_w);

    if (out.difficulty == 0.0) {
        // Degenerate benchmark: everyone (or no one) holds the outcome, so a
        // zero error carries no defect signal and a nonzero one is impossible
        // to standardize.
        if (out.total_error != 0.0) {
            throw DegenerateBenchmarkError(wave.survey_id + " " + wave.wave_end.iso() +
                                           ": benchmark of exactly 0 or 1 with nonzero error");
        }
        out.ddc = 0.0;
    } else {
        out.ddc = out.total_error / (out.scarcity * out.difficulty);
    }

    out.z_w = out.ddc * std::sqrt(population);
    out.data_defect_index = out.ddc * out.ddc;

    const BiasAdjustedNeff neff = bias_adjusted_neff(out.data_defect_index, out.n_w, frame.size);
    out.n_eff = neff.n_eff;
    out.srs_floor_applied = neff.srs_floor_applied;
    out.log10_n_eff = std::log10(out.n_eff);
    return out;
}

double ddc_from_error(double total_error, double n_w, std::int64_t population_size, double sigma) {
    const double population = static_cast<double>(population_size);
    if (!(n_w > 0.0) || n_w >= population) {
        throw ValidationError("ddc_from_error requires 0 < n_w < N");
    }
    if (sigma < 0.0) {
        throw ValidationError("sigma must be nonnegative");
    }
    if (sigma == 0.0) {
        if (total_error != 0.0) {
            throw DegenerateBenchmarkError("zero sigma with nonzero error: ddc undefined");
        }
        return 0.0;
    }
    return total_error / (std::sqrt((population - n_w) / n_w) * sigma);
}

KishResult kish_effective_n(std::span<const double> weights) {
    if (weights.empty()) {
        throw InvalidWeightsError("kish_effective_n requires at least one weight");
    }
    for (double wi : weights) {
        if (!(wi > 0.0)) throw InvalidWeightsError("weights must be strictly positive");
    }
    const double n = static_cast<double>(weights.size());
    const double w_mean = mean(weights);

    // Rescale to mean 1, then CV^2 is the population variance (denominator n)
    // of the rescaled weights.
    KahanSum ss;
    for (double wi : weights) {
        const double centered = wi / w_mean - 1.0;
        ss.add(centered * centered);
    }
    const double cv_sq = ss.value() / n;

    KishResult out;
    out.design_effect = 1.0 + cv_sq;
    out.n_w = n / out.design_effect;
    return out;
}

KishResult kish_effective_n(std::int64_t n, double design_effect) {
    if (n < 1) {
        throw ValidationError("kish_effective_n requires n >= 1");
    }
    if (design_effect < 1.0) {
        throw ValidationError("design effect must be >= 1");
    }
    KishResult out;
    out.design_effect = design_effect;
    out.n_w = static_cast<double>(n) / design_effect;
    return out;
}

BiasAdjustedNeff bias_adjusted_neff(double rho_sq, double n_w, std::int64_t population_size) {
    const double population = static_cast<double>(population_size);
    if (!(n_w > 0.0) || n_w >= population) {
        throw ValidationError("bias_adjusted_neff requires 0 < n_w < N");
    }
    if (rho_sq < 0.0) {
        throw ValidationError("rho_sq must be nonnegative");
    }
    BiasAdjustedNeff out;
    if (rho_sq == 0.0) {
        // SRS floor: a zero realized ddc is replaced by the squared ddc one
        // would expect from simple random sampling, 1/(N-1), so the result
        // stays finite (and close to n_w).
        rho_sq = 1.0 / (population - 1.0);
        out.srs_floor_applied = true;
    }
    out.n_eff = n_w / (population - n_w) / rho_sq;
    return out;
}

double ddc_population_oracle(const FinitePopulation& pop) {
    pop.validate();
    const std::vector<double> rw = pop.weighted_indicator();
    const double var_y = population_variance(pop.y);
    const double var_rw = population_variance(rw);
    if (var_y <= 0.0 || var_rw <= 0.0) {
        throw UndefinedCorrelationError("zero variance in Y or R_w");
    }
    return population_covariance(pop.y, rw) / std::sqrt(var_y * var_rw);
}

double kendall_tau(std::span<const double> ranking_a, std::span<const double> ranking_b) {
    if (ranking_a.size() != ranking_b.size()) {
        throw SchemaError("kendall_tau rankings differ in length");
    }
    if (ranking_a.size() < 2) {
        throw ValidationError("kendall_tau requires at least two elements");
    }

    // All-pairs tau-b. O(n^2) is adequate for ranking comparisons at the
    // scale used here (dozens of states).
    std::int64_t concordant = 0;
    std::int64_t discordant = 0;
    std::int64_t ties_a = 0;
    std::int64_t ties_b = 0;
    const std::size_t n = ranking_a.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double da = ranking_a[i] - ranking_a[j];
            const double db = ranking_b[i] - ranking_b[j];
            if (da == 0.0 && db == 0.0) continue;
            if (da == 0.0) {
                ++ties_a;
            } else if (db == 0.0) {
                ++ties_b;
            } else if (da * db > 0.0) {
                ++concordant;
            } else {
                ++discordant;
            }
        }
    }
    const double denom =
        std::sqrt(static_cast<double>(concordant + discordant + ties_a) *
                  static_cast<double>(concordant + discordant + ties_b));
    if (denom == 0.0) {
        throw UndefinedCorrelationError("kendall_tau undefined for a fully tied ranking");
    }
    return static_cast<double>(concordant - discordant) / denom;
}

}  // namespace surveyq
