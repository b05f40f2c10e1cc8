#pragma once

#include <vector>

#include "fluctana/series.hpp"

namespace fluctana {

// Empirical return density against a Gaussian of matched mean/variance,
// with fat-tail indicators.
struct DensityComparison {
    std::vector<double> bin_centers;
    std::vector<double> empirical_density;  // integrates to 1
    std::vector<double> gaussian_density;   // sample mean/std reference on the same bins
    double excess_kurtosis = 0.0;           // fourth-moment estimator, Gaussian = 0
    double tail_ratio = 0.0;                // empirical / Gaussian mass beyond +-3 sigma
    double sample_mean = 0.0;
    double sample_stddev = 0.0;
};

// Symmetric equal-width bins spanning [-max|v|, +max|v|].
DensityComparison density_compare(const ReturnSeries& returns, int bins);

}  // namespace fluctana
