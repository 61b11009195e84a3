#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace dgff {

struct EstimatorSummary {
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0;               // unbiased; 0 when n = 1
    std::optional<double> se;            // undefined for n = 1
    std::vector<std::pair<double, double>> quantiles;  // (p, value), p ascending
    std::optional<std::pair<double, double>> ci;       // bootstrap percentile interval
};

struct EstimateOptions {
    std::vector<double> quantiles;
    int bootstrap = 0;        // resamples; 0 disables
    double level = 0.95;
    std::uint64_t seed = 0;
};

EstimatorSummary estimate(std::span<const double> samples, const EstimateOptions& opt = {});

// Linear interpolation between order statistics.
double quantile(std::vector<double> samples, double p);
double median(std::vector<double> samples);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    double r2 = 0.0;
};

LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

} // namespace dgff
