#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace surveyq {

/// Neumaier-compensated accumulator. The exact-identity checks in this
/// library are required to hold to 1e-12 relative tolerance, which plain
/// left-to-right summation does not guarantee for long inputs.
class KahanSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) {
    KahanSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

/// Mean with denominator N.
inline double mean(std::span<const double> xs) {
    return compensated_sum(xs) / static_cast<double>(xs.size());
}

/// Population covariance: denominator N, two-pass.
inline double population_covariance(std::span<const double> a, std::span<const double> b) {
    const double ma = mean(a);
    const double mb = mean(b);
    KahanSum s;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s.add((a[i] - ma) * (b[i] - mb));
    }
    return s.value() / static_cast<double>(a.size());
}

/// Population variance: denominator N.
inline double population_variance(std::span<const double> xs) {
    return population_covariance(xs, xs);
}

inline double logistic(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

inline double normal_pdf(double x) {
    static const double kInvSqrt2Pi = 0.3989422804014326779;
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

/// Standard normal CDF via erfc; absolute error well below 1e-12.
inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

}  // namespace surveyq
