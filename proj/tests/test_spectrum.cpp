#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "fluctana/errors.hpp"
#include "fluctana/fft.hpp"
#include "fluctana/fluctuation.hpp"
#include "fluctana/rng.hpp"
#include "fluctana/spectrum.hpp"
#include "fluctana/synth.hpp"
#include "fluctana/wavelet.hpp"
#include "oracles.hpp"

using namespace fluctana;

namespace {

Profile profile_of(const std::vector<double>& values, bool subtract_mean = true) {
    ReturnSeries r;
    r.values = values;
    return build_profile(r, subtract_mean);
}

Profile random_walk(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> steps(n);
    for (auto& v : steps) v = rng.gaussian();
    return profile_of(steps);
}

}  // namespace

TEST_CASE("fft agrees with the quadratic DFT at awkward lengths") {
    for (const std::size_t n : {2UL, 3UL, 5UL, 8UL, 13UL, 27UL, 64UL, 100UL, 251UL, 729UL}) {
        CAPTURE(n);
        Rng rng(n);
        std::vector<fft::cplx> x(n);
        for (auto& v : x) v = fft::cplx(rng.gaussian(), rng.gaussian());
        auto got = x;
        fft::forward(got);
        const auto expect = oracles::naive_dft(x);
        double max_mag = 0.0;
        for (const auto& v : expect) max_mag = std::max(max_mag, std::abs(v));
        for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(got[k] - expect[k]) < 1e-9 * max_mag);

        fft::inverse(got);
        for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(got[k] - x[k]) < 1e-10 * max_mag);
    }
}

TEST_CASE("power spectrum of a pure sinusoid concentrates in one bin") {
    const std::size_t n = 4096;
    Profile p;
    p.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) p.values[i] = std::sin(2.0 * M_PI * static_cast<double>(i) / 64.0);
    const PowerSpectrum ps = power_spectrum(p);
    REQUIRE(ps.frequencies.size() == n / 2);

    std::size_t best = 0;
    for (std::size_t i = 1; i < ps.power.size(); ++i)
        if (ps.power[i] > ps.power[best]) best = i;
    CHECK(ps.frequencies[best] == doctest::Approx(1.0 / 64.0).epsilon(1e-12));

    auto sorted = ps.power;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    CHECK(ps.power[best] > 100.0 * std::max(median, 1e-300));
}

TEST_CASE("zero profile gives zero power") {
    Profile p;
    p.values.assign(64, 0.0);
    const PowerSpectrum ps = power_spectrum(p);
    for (double v : ps.power) CHECK(v == 0.0);
}

TEST_CASE("parseval ties total power to the variance") {
    for (const std::size_t n : {256UL, 777UL, 2903UL}) {
        CAPTURE(n);
        const Profile p = random_walk(n, 3 + n);
        const PowerSpectrum ps = power_spectrum(p);

        double m = 0.0;
        for (double v : p.values) m += v;
        m /= static_cast<double>(n);
        double var = 0.0;
        for (double v : p.values) var += (v - m) * (v - m);
        var /= static_cast<double>(n);

        // two-sided accounting: interior one-sided bins count twice, the
        // Nyquist bin (even n) once
        double total = 0.0;
        for (std::size_t i = 0; i < ps.power.size(); ++i) {
            const bool nyquist = (n % 2 == 0) && (i + 1 == n / 2);
            total += nyquist ? ps.power[i] : 2.0 * ps.power[i];
        }
        CHECK(total == doctest::Approx(static_cast<double>(n) * var).epsilon(1e-8));
    }
}

TEST_CASE("power spectrum rejects short input") {
    Profile p;
    p.values.assign(8, 1.0);
    CHECK_THROWS_AS(power_spectrum(p), ValidationError);
}

TEST_CASE("exact synthetic power law fits exactly") {
    PowerSpectrum ps;
    ps.source_length = 4096;
    for (std::size_t k = 1; k <= 2048; ++k) {
        const double f = static_cast<double>(k) / 4096.0;
        ps.frequencies.push_back(f);
        ps.power.push_back(std::pow(f, -1.5));
    }
    SUBCASE("unbinned") {
        const PowerSpectrum fitted = fit_alpha(ps, std::nullopt, 0);
        CHECK(fitted.alpha == doctest::Approx(1.5).epsilon(1e-9));
        CHECK(fitted.alpha_stderr < 1e-9);
        CHECK(fitted.r2 == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("binned stays exact on an exact law") {
        const PowerSpectrum fitted = fit_alpha(ps, std::nullopt, 16);
        CHECK(fitted.alpha == doctest::Approx(1.5).epsilon(1e-9));
        CHECK(fitted.log_bins == 16);
    }
    SUBCASE("band restriction is honored") {
        const PowerSpectrum fitted = fit_alpha(ps, FrequencyBand{0.01, 0.1}, 16);
        CHECK(fitted.fit_band.lo == doctest::Approx(0.01));
        CHECK(fitted.fit_band.hi == doctest::Approx(0.1));
        CHECK(fitted.alpha == doctest::Approx(1.5).epsilon(1e-9));
    }
}

TEST_CASE("random-walk profile scales with alpha near two") {
    const Profile p = random_walk(8192, 11);
    const PowerSpectrum ps = fit_alpha(power_spectrum(p));
    CHECK(std::abs(ps.alpha - 2.0) < 0.2);
}

TEST_CASE("fGn profiles reproduce alpha = 2H + 1") {
    GeneratorSpec spec;
    spec.kind = GeneratorSpec::Kind::fgn;
    spec.length = 8192;

    SUBCASE("single seeded H = 0.7 run") {
        spec.hurst = 0.7;
        spec.seed = 4;
        const PowerSpectrum ps = fit_alpha(power_spectrum(profile_of(fgn(spec).values)));
        CHECK(std::abs(ps.alpha - 2.4) < 0.25);
    }

    SUBCASE("ensemble means across H") {
        for (const double h : {0.3, 0.5, 0.7}) {
            double acc = 0.0;
            const int seeds = 20;
            for (int s = 0; s < seeds; ++s) {
                spec.hurst = h;
                spec.seed = 500 + static_cast<std::uint64_t>(s);
                acc += fit_alpha(power_spectrum(profile_of(fgn(spec).values))).alpha;
            }
            CAPTURE(h);
            CHECK(std::abs(acc / seeds - (2.0 * h + 1.0)) < 0.25);
        }
    }
}

TEST_CASE("alpha is invariant under positive rescaling") {
    const Profile p = random_walk(4096, 9);
    Profile scaled;
    scaled.values.resize(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) scaled.values[i] = 1234.5 * p.values[i];
    const double a1 = fit_alpha(power_spectrum(p)).alpha;
    const double a2 = fit_alpha(power_spectrum(scaled)).alpha;
    CHECK(std::abs(a1 - a2) < 1e-9);
}

TEST_CASE("fit_alpha error paths") {
    Profile p;
    p.values.assign(64, 0.0);
    CHECK_THROWS_AS(fit_alpha(power_spectrum(p)), DegenerateError);  // zero power

    const Profile walk = random_walk(64, 5);
    const PowerSpectrum ps = power_spectrum(walk);
    CHECK_THROWS_AS(fit_alpha(ps, FrequencyBand{0.4, 0.2}), ValidationError);
    CHECK_THROWS_AS(fit_alpha(ps, FrequencyBand{0.01, 0.02}), ValidationError);  // < 8 bins
}

TEST_CASE("consistency check arithmetic") {
    SUBCASE("reported exponents are mutually consistent") {
        const Consistency c = consistency_check(2.11, 0.5486);
        CHECK(c.predicted_alpha == doctest::Approx(2.0972).epsilon(1e-12));
        CHECK(c.gap == doctest::Approx(0.0128).epsilon(1e-9));
        CHECK(c.consistent);
    }
    SUBCASE("a full unit of gap is inconsistent") {
        const Consistency c = consistency_check(3.0, 0.5);
        CHECK(c.gap == doctest::Approx(1.0));
        CHECK_FALSE(c.consistent);
    }
    SUBCASE("exact relation") {
        const Consistency c = consistency_check(2.0, 0.5);
        CHECK(c.gap == doctest::Approx(0.0));
        CHECK(c.consistent);
    }
}

TEST_CASE("spectral and fluctuation exponents agree on synthetic noise") {
    GeneratorSpec spec;
    spec.kind = GeneratorSpec::Kind::fgn;
    spec.length = 8192;
    spec.hurst = 0.6;
    spec.seed = 77;
    const Profile prof = profile_of(fgn(spec).values);
    const double alpha = fit_alpha(power_spectrum(prof)).alpha;
    const double hurst = fit_scaling(wbfa(prof, make_filter(WaveletFamily::daubechies, 6), QGrid::regular())).hurst;
    CHECK(consistency_check(alpha, hurst).consistent);
}
