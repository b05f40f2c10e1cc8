#include "fluctana/density.hpp"

#include <algorithm>
#include <cmath>

#include "fluctana/errors.hpp"
#include "fluctana/stats.hpp"

namespace fluctana {

DensityComparison density_compare(const ReturnSeries& returns, int bins) {
    const auto& v = returns.values;
    if (bins < 10) throw ValidationError("density comparison needs at least 10 bins");
    if (v.size() < 100) throw ValidationError("density comparison needs at least 100 samples, got " + std::to_string(v.size()));

    double vmax = 0.0;
    for (double x : v) vmax = std::max(vmax, std::abs(x));
    if (!(vmax > 0.0)) throw DegenerateError("all returns are zero");

    DensityComparison out;
    out.sample_mean = mean(v);
    out.sample_stddev = sample_stddev(v);
    if (!(out.sample_stddev > 0.0)) throw DegenerateError("zero return variance");

    const double width = 2.0 * vmax / static_cast<double>(bins);
    std::vector<long> counts(static_cast<std::size_t>(bins), 0);
    for (double x : v) {
        int idx = static_cast<int>(std::floor((x + vmax) / width));
        idx = std::min(std::max(idx, 0), bins - 1);  // +vmax lands on the upper edge
        ++counts[static_cast<std::size_t>(idx)];
    }

    const double n = static_cast<double>(v.size());
    out.bin_centers.resize(static_cast<std::size_t>(bins));
    out.empirical_density.resize(static_cast<std::size_t>(bins));
    out.gaussian_density.resize(static_cast<std::size_t>(bins));
    const double inv_sqrt2pi = 0.3989422804014327;
    for (int i = 0; i < bins; ++i) {
        const double center = -vmax + (static_cast<double>(i) + 0.5) * width;
        out.bin_centers[static_cast<std::size_t>(i)] = center;
        out.empirical_density[static_cast<std::size_t>(i)] = static_cast<double>(counts[static_cast<std::size_t>(i)]) / (n * width);
        const double z = (center - out.sample_mean) / out.sample_stddev;
        out.gaussian_density[static_cast<std::size_t>(i)] = inv_sqrt2pi / out.sample_stddev * std::exp(-0.5 * z * z);
    }

    // central-moment kurtosis
    double m2 = 0.0, m4 = 0.0;
    for (double x : v) {
        const double d = x - out.sample_mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m4 /= n;
    out.excess_kurtosis = m4 / (m2 * m2) - 3.0;

    long beyond = 0;
    const double cut = 3.0 * out.sample_stddev;
    for (double x : v)
        if (std::abs(x - out.sample_mean) > cut) ++beyond;
    const double gaussian_tail = std::erfc(3.0 / std::sqrt(2.0));  // two-sided mass beyond 3 sigma
    out.tail_ratio = (static_cast<double>(beyond) / n) / gaussian_tail;
    return out;
}

}  // namespace fluctana
