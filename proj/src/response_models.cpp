#include "surveyq/response_models.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <thread>

#include "surveyq/core_metrics.hpp"
#include "surveyq/errors.hpp"
#include "surveyq/rng.hpp"
#include "surveyq/stats.hpp"

namespace surveyq {

namespace {

constexpr double kDegenerateResponseTol = 1e-12;

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;
};

MeanSd summarize(std::span<const double> xs) {
    MeanSd out;
    out.mean = mean(xs);
    out.sd = std::sqrt(population_variance(xs));
    return out;
}

}  // namespace

void LogitResponseModel::validate() const {
    if (!std::isfinite(alpha) || !std::isfinite(beta)) {
        throw ValidationError("logit model parameters must be finite");
    }
    if (!(mu > 0.0) || !(mu < 1.0)) {
        throw ValidationError("mu must lie strictly inside (0,1)");
    }
}

LogitLimits logit_limits(const LogitResponseModel& model) {
    model.validate();
    const double p0 = logistic(model.alpha);
    const double p1 = logistic(model.alpha + model.beta);
    LogitLimits out;
    out.f_limit = (1.0 - model.mu) * p0 + model.mu * p1;
    const double p = out.f_limit;
    out.rho_limit = (p1 - p0) * std::sqrt(model.mu * (1.0 - model.mu)) /
                    std::sqrt(p * (1.0 - p));
    return out;
}

BiasMse logit_bias_mse(const LogitResponseModel& model, std::int64_t population_size) {
    if (population_size < 2) {
        throw ValidationError("logit_bias_mse requires N >= 2");
    }
    const LogitLimits limits = logit_limits(model);
    const double f = limits.f_limit;
    if (f <= kDegenerateResponseTol || f >= 1.0 - kDegenerateResponseTol) {
        throw DegenerateResponseError("limiting response fraction is numerically 0 or 1");
    }
    const double sigma_sq = model.mu * (1.0 - model.mu);
    BiasMse out;
    out.bias = limits.rho_limit * std::sqrt((1.0 - f) / f) * std::sqrt(sigma_sq);
    out.mse = out.bias * out.bias +
              (1.0 - f) / (f * static_cast<double>(population_size)) * sigma_sq;
    return out;
}

SimulationSummary simulate_logit_population(const LogitResponseModel& model,
                                            std::int64_t population_size, std::uint64_t seed,
                                            int replications) {
    model.validate();
    if (population_size < 100) {
        throw ValidationError("simulate_logit_population requires N >= 100");
    }
    if (replications < 1) {
        throw ValidationError("simulate_logit_population requires replications >= 1");
    }

    const double p_respond_y0 = logistic(model.alpha);
    const double p_respond_y1 = logistic(model.alpha + model.beta);
    const std::size_t n_units = static_cast<std::size_t>(population_size);

    std::vector<double> fs(static_cast<std::size_t>(replications));
    std::vector<double> rhos(static_cast<std::size_t>(replications));
    std::vector<double> errors(static_cast<std::size_t>(replications));
    std::vector<std::int64_t> redraws(static_cast<std::size_t>(replications), 0);

    // A replication whose draw is degenerate (nobody responds, everybody
    // responds, or the outcome is constant) is redrawn on a fresh stream.
    // The cap keeps pathological parameter choices from spinning forever.
    constexpr std::uint64_t kMaxAttempts = 1000;

    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto run_replication = [&](std::size_t rep) {
        // Streams are indexed (rep, attempt) so a redraw consumes a fresh
        // stream without disturbing any other replication.
        for (std::uint64_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
            std::mt19937_64 eng = stream_engine(seed, rep * 1024 + attempt);
            std::int64_t y_sum = 0;
            std::int64_t respondents = 0;
            std::int64_t respondent_y_sum = 0;
            for (std::size_t i = 0; i < n_units; ++i) {
                const bool y = uniform01(eng) < model.mu;
                const bool responds = uniform01(eng) < (y ? p_respond_y1 : p_respond_y0);
                y_sum += y;
                if (responds) {
                    ++respondents;
                    respondent_y_sum += y;
                }
            }
            const bool degenerate_r =
                respondents == 0 || respondents == static_cast<std::int64_t>(n_units);
            const bool degenerate_y =
                y_sum == 0 || y_sum == static_cast<std::int64_t>(n_units);
            if (degenerate_r || degenerate_y) {
                ++redraws[rep];
                continue;
            }

            const double n_d = static_cast<double>(n_units);
            const double f_emp = static_cast<double>(respondents) / n_d;
            const double y_bar = static_cast<double>(y_sum) / n_d;
            const double sample_mean =
                static_cast<double>(respondent_y_sum) / static_cast<double>(respondents);

            // Pearson correlation of two binary vectors reduces to counts:
            // Cov(Y,R) = E[YR] - E[Y]E[R].
            const double cov =
                static_cast<double>(respondent_y_sum) / n_d - y_bar * f_emp;
            const double sigma_y = std::sqrt(y_bar * (1.0 - y_bar));
            const double sigma_r = std::sqrt(f_emp * (1.0 - f_emp));

            fs[rep] = f_emp;
            rhos[rep] = cov / (sigma_y * sigma_r);
            errors[rep] = sample_mean - y_bar;
            return;
        }
        throw DegenerateResponseError(
            "replication " + std::to_string(rep) + " stayed degenerate after " +
            std::to_string(kMaxAttempts) + " redraws; response model is numerically 0 or 1");
    };

    auto guarded_replication = [&](std::size_t rep) {
        try {
            run_replication(rep);
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };

    const std::size_t reps = static_cast<std::size_t>(replications);
    const std::size_t workers =
        std::min<std::size_t>(reps, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t rep = 0; rep < reps; ++rep) guarded_replication(rep);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t t = 0; t < workers; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t rep = t; rep < reps; rep += workers) guarded_replication(rep);
            });
        }
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    SimulationSummary out;
    out.population_size = population_size;
    out.replications = replications;
    out.seed = seed;
    const MeanSd f_stats = summarize(fs);
    const MeanSd rho_stats = summarize(rhos);
    const MeanSd err_stats = summarize(errors);
    out.mean_f = f_stats.mean;
    out.sd_f = f_stats.sd;
    out.mean_rho = rho_stats.mean;
    out.sd_rho = rho_stats.sd;
    out.mean_error = err_stats.mean;
    out.sd_error = err_stats.sd;
    for (std::int64_t rd : redraws) out.redraws += rd;
    out.redraw_warning =
        static_cast<double>(out.redraws) > 0.01 * static_cast<double>(replications);
    out.limits = logit_limits(model);
    return out;
}

void HeckmanParams::validate() const {
    if (!(r >= -1.0 && r <= 1.0)) {
        throw ValidationError("heckman r must lie in [-1,1]");
    }
    if (!std::isfinite(z)) {
        throw ValidationError("heckman z must be finite");
    }
}

double heckman_ddc(const HeckmanParams& params) {
    params.validate();
    // Phi(-z) * (1 - Phi(-z)) is symmetric in the sign of z; evaluating the
    // small tail through erfc keeps full precision for large |z|.
    const double tail = normal_cdf(-std::abs(params.z));
    if (tail <= 0.0) {
        throw OverflowGuardError(
            "selection tail probability underflows at |z| = " + std::to_string(std::abs(params.z)) +
            "; the ddc limit is 0 but cannot be evaluated stably this far out");
    }
    return params.r * normal_pdf(params.z) / std::sqrt(tail * (1.0 - tail));
}

double heckman_oracle(const HeckmanParams& params, std::int64_t draws, std::uint64_t seed,
                      bool antithetic) {
    params.validate();
    if (draws < 10'000) {
        throw ValidationError("heckman_oracle requires at least 1e4 draws");
    }

    std::mt19937_64 eng = stream_engine(seed, 0);
    NormalSampler normal(eng);
    const double mix = std::sqrt(1.0 - params.r * params.r);

    // Accumulate what the sample correlation needs; the selection indicator
    // is binary so its moments are counts.
    KahanSum sum_u;
    KahanSum sum_uu;
    KahanSum sum_us;
    std::int64_t selected = 0;
    std::int64_t total = 0;

    auto accumulate = [&](double v, double e) {
        const double u = params.r * v + mix * e;
        const bool s = v >= params.z;
        sum_u.add(u);
        sum_uu.add(u * u);
        if (s) {
            sum_us.add(u);
            ++selected;
        }
        ++total;
    };

    if (antithetic) {
        const std::int64_t pairs = draws / 2;
        for (std::int64_t i = 0; i < pairs; ++i) {
            const double v = normal();
            const double e = normal();
            accumulate(v, e);
            accumulate(-v, -e);
        }
    } else {
        for (std::int64_t i = 0; i < draws; ++i) {
            accumulate(normal(), normal());
        }
    }

    const double n = static_cast<double>(total);
    const double mean_u = sum_u.value() / n;
    const double mean_s = static_cast<double>(selected) / n;
    const double cov = sum_us.value() / n - mean_u * mean_s;
    const double var_u = sum_uu.value() / n - mean_u * mean_u;
    const double var_s = mean_s * (1.0 - mean_s);
    if (var_u <= 0.0 || var_s <= 0.0) {
        throw UndefinedCorrelationError("heckman_oracle: degenerate sample (all selected or none)");
    }
    return cov / std::sqrt(var_u * var_s);
}

DominatingPopulation dominating_population(std::span<const SamplingStage> stages,
                                           std::size_t first_biased_stage) {
    if (stages.empty()) {
        throw InvalidStagesError("no sampling stages given");
    }
    if (first_biased_stage < 1 || first_biased_stage > stages.size()) {
        throw InvalidStagesError("first_biased_stage out of range (stages are numbered from 1)");
    }

    DominatingPopulation out;
    out.stage_fractions.reserve(stages.size());
    for (std::size_t s = 0; s < stages.size(); ++s) {
        const SamplingStage& stage = stages[s];
        if (stage.population < 1 || stage.realized < 1 || stage.realized > stage.population) {
            throw InvalidStagesError("stage '" + stage.name +
                                     "' needs 0 < realized <= population");
        }
        if (s > 0 && stages[s - 1].realized != stage.population) {
            throw InvalidStagesError("stage '" + stage.name +
                                     "' does not chain: population must equal the previous "
                                     "stage's realized count");
        }
        const double fraction =
            static_cast<double>(stage.realized) / static_cast<double>(stage.population);
        out.stage_fractions.push_back(fraction);
        out.overall_fraction *= fraction;
    }
    out.dps = stages[first_biased_stage - 1].population;
    return out;
}

}  // namespace surveyq
