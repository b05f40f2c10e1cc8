#pragma once

#include <cstdint>
#include <string>

#include "fluctana/series.hpp"

namespace fluctana {

// Synthetic series with analytically known scaling, used as estimator
// ground truth. Generation is single-threaded and fully deterministic for a
// given spec (see rng.hpp for the pinned generator algorithms).
struct GeneratorSpec {
    enum class Kind { gaussian_white, fgn, binomial_cascade };

    Kind kind = Kind::gaussian_white;
    std::size_t length = 0;
    std::uint64_t seed = 0;
    double hurst = 0.5;      // fgn target H, in (0,1)
    double cascade_a = 0.75; // cascade weight, in (0.5,1)

    static Kind kind_from_string(const std::string& s);
    static const char* to_string(Kind k);
};

// i.i.d. standard normal draws.
TimeSeries gaussian_white(const GeneratorSpec& spec);

// Fractional Gaussian noise with the exact target autocovariance via
// circulant embedding (Davies-Harte); an embedding with negative
// eigenvalues is reported as an error, never approximated.
TimeSeries fgn(const GeneratorSpec& spec);

// Deterministic binomial multiplicative cascade:
// x_i = a^{n(i)} (1-a)^{k-n(i)} with n(i) the 1-bit count of i, length 2^k.
// Closed-form exponents: h(q) = 1/q - ln(a^q + (1-a)^q)/(q ln 2).
TimeSeries binomial_cascade(const GeneratorSpec& spec);

TimeSeries generate(const GeneratorSpec& spec);

// Closed-form cascade exponent, q = 0 handled by its analytic limit.
double cascade_hq(double q, double a);

}  // namespace fluctana
