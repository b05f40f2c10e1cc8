#include <doctest.h>

#include <cmath>
#include <vector>

#include "fluctana/density.hpp"
#include "fluctana/errors.hpp"
#include "fluctana/rng.hpp"

using namespace fluctana;

namespace {

ReturnSeries gaussian_returns(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    ReturnSeries r;
    r.values.resize(n);
    for (auto& v : r.values) v = rng.gaussian();
    return r;
}

ReturnSeries laplace_returns(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    ReturnSeries r;
    r.values.resize(n);
    for (auto& v : r.values) {
        const double u = rng.uniform() - 0.5;
        v = (u < 0.0 ? 1.0 : -1.0) * std::log(1.0 - 2.0 * std::abs(u));
    }
    return r;
}

double integrate(const DensityComparison& d) {
    const double width = d.bin_centers[1] - d.bin_centers[0];
    double acc = 0.0;
    for (double v : d.empirical_density) acc += v;
    return acc * width;
}

}  // namespace

TEST_CASE("gaussian sample sits on the gaussian reference") {
    const DensityComparison d = density_compare(gaussian_returns(100000, 21), 61);
    CHECK(std::abs(d.excess_kurtosis) < 0.1);
    CHECK(d.tail_ratio > 0.7);
    CHECK(d.tail_ratio < 1.4);
    CHECK(integrate(d) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("laplace sample shows its excess kurtosis") {
    const ReturnSeries r = laplace_returns(100000, 22);
    const DensityComparison d = density_compare(r, 75);
    CHECK(std::abs(d.excess_kurtosis - 3.0) < 0.3);

    // independent moment oracle
    double m = 0.0;
    for (double v : r.values) m += v;
    m /= static_cast<double>(r.size());
    double m2 = 0.0, m4 = 0.0;
    for (double v : r.values) {
        const double c = v - m;
        m2 += c * c;
        m4 += c * c * c * c;
    }
    m2 /= static_cast<double>(r.size());
    m4 /= static_cast<double>(r.size());
    CHECK(d.excess_kurtosis == doctest::Approx(m4 / (m2 * m2) - 3.0).epsilon(1e-12));

    // fat-tail indicators against the matched gaussian
    CHECK(d.excess_kurtosis > 1.0);
    CHECK(d.tail_ratio > 2.0);
    double peak_emp = 0.0, peak_gauss = 0.0;
    for (std::size_t i = 0; i < d.bin_centers.size(); ++i) {
        peak_emp = std::max(peak_emp, d.empirical_density[i]);
        peak_gauss = std::max(peak_gauss, d.gaussian_density[i]);
    }
    CHECK(peak_emp > peak_gauss);  // sharper near the origin
}

TEST_CASE("affine rescaling leaves the indicators unchanged") {
    const ReturnSeries base = laplace_returns(50000, 5);
    ReturnSeries scaled = base;
    for (auto& v : scaled.values) v = 250.0 * v;
    const DensityComparison a = density_compare(base, 61);
    const DensityComparison b = density_compare(scaled, 61);
    CHECK(std::abs(a.excess_kurtosis - b.excess_kurtosis) < 1e-9);
    CHECK(std::abs(a.tail_ratio - b.tail_ratio) < 1e-9);
    CHECK(integrate(b) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("validation and degeneracy") {
    CHECK_THROWS_AS(density_compare(gaussian_returns(100000, 1), 5), ValidationError);
    CHECK_THROWS_AS(density_compare(gaussian_returns(50, 1), 61), ValidationError);

    ReturnSeries zeros;
    zeros.values.assign(500, 0.0);
    CHECK_THROWS_AS(density_compare(zeros, 61), DegenerateError);
}
