#include "fluctana/synth.hpp"

#include <bit>
#include <cmath>

#include "fluctana/errors.hpp"
#include "fluctana/fft.hpp"
#include "fluctana/rng.hpp"

namespace fluctana {

GeneratorSpec::Kind GeneratorSpec::kind_from_string(const std::string& s) {
    if (s == "gaussian-white") return Kind::gaussian_white;
    if (s == "fgn") return Kind::fgn;
    if (s == "binomial-cascade") return Kind::binomial_cascade;
    throw ValidationError("unknown generator kind '" + s + "'");
}

const char* GeneratorSpec::to_string(Kind k) {
    switch (k) {
        case Kind::gaussian_white: return "gaussian-white";
        case Kind::fgn: return "fgn";
        case Kind::binomial_cascade: return "binomial-cascade";
    }
    return "?";
}

namespace {

void validate(const GeneratorSpec& spec) {
    if (spec.length < 64) throw ValidationError("generator length must be >= 64");
    if (spec.kind == GeneratorSpec::Kind::fgn && !(spec.hurst > 0.0 && spec.hurst < 1.0))
        throw ValidationError("fgn needs H in (0,1)");
    if (spec.kind == GeneratorSpec::Kind::binomial_cascade) {
        if ((spec.length & (spec.length - 1)) != 0)
            throw ValidationError("cascade length must be a power of 2, got " + std::to_string(spec.length));
        if (!(spec.cascade_a > 0.5 && spec.cascade_a < 1.0)) throw ValidationError("cascade weight a must be in (0.5, 1)");
    }
}

double fgn_autocovariance(double h, double k) {
    const double e = 2.0 * h;
    return 0.5 * (std::pow(std::abs(k + 1.0), e) - 2.0 * std::pow(std::abs(k), e) + std::pow(std::abs(k - 1.0), e));
}

}  // namespace

TimeSeries gaussian_white(const GeneratorSpec& spec) {
    validate(spec);
    TimeSeries out;
    out.name = "gaussian-white(seed=" + std::to_string(spec.seed) + ")";
    out.values.resize(spec.length);
    Rng rng(spec.seed);
    for (auto& v : out.values) v = rng.gaussian();
    return out;
}

TimeSeries fgn(const GeneratorSpec& spec) {
    validate(spec);
    const std::size_t n = spec.length;
    const std::size_t m = 2 * n;

    // circulant first row of the embedded covariance
    std::vector<fft::cplx> c(m);
    for (std::size_t j = 0; j <= n; ++j) c[j] = fgn_autocovariance(spec.hurst, static_cast<double>(j));
    for (std::size_t j = n + 1; j < m; ++j) c[j] = c[m - j];
    fft::forward(c);

    double max_lambda = 0.0;
    for (const auto& v : c) max_lambda = std::max(max_lambda, v.real());
    std::vector<double> lambda(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double l = c[k].real();
        if (l < -1e-8 * max_lambda)
            throw DegenerateError("fgn circulant embedding is not nonnegative definite (H = " +
                                  std::to_string(spec.hurst) + ")");
        lambda[k] = l > 0.0 ? l : 0.0;
    }

    // X = F V with V_k = sqrt(lambda_k / M) (a_k + i b_k); Re X has the
    // exact fGn covariance.
    Rng rng(spec.seed);
    std::vector<fft::cplx> v(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double amp = std::sqrt(lambda[k] / static_cast<double>(m));
        const double a = rng.gaussian();
        const double b = rng.gaussian();
        v[k] = fft::cplx(amp * a, amp * b);
    }
    fft::forward(v);

    TimeSeries out;
    out.name = "fgn(H=" + std::to_string(spec.hurst) + ",seed=" + std::to_string(spec.seed) + ")";
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = v[i].real();
    return out;
}

TimeSeries binomial_cascade(const GeneratorSpec& spec) {
    validate(spec);
    const std::size_t n = spec.length;
    int k = 0;
    while ((static_cast<std::size_t>(1) << k) < n) ++k;

    std::vector<double> weight(static_cast<std::size_t>(k) + 1);
    for (int j = 0; j <= k; ++j)
        weight[static_cast<std::size_t>(j)] = std::pow(spec.cascade_a, j) * std::pow(1.0 - spec.cascade_a, k - j);

    TimeSeries out;
    out.name = "binomial-cascade(a=" + std::to_string(spec.cascade_a) + ")";
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = weight[static_cast<std::size_t>(std::popcount(i))];
    return out;
}

TimeSeries generate(const GeneratorSpec& spec) {
    switch (spec.kind) {
        case GeneratorSpec::Kind::gaussian_white: return gaussian_white(spec);
        case GeneratorSpec::Kind::fgn: return fgn(spec);
        case GeneratorSpec::Kind::binomial_cascade: return binomial_cascade(spec);
    }
    throw ValidationError("unknown generator kind");
}

double cascade_hq(double q, double a) {
    const double ln2 = std::log(2.0);
    if (q == 0.0) return -std::log(a * (1.0 - a)) / (2.0 * ln2);
    return 1.0 / q - std::log(std::pow(a, q) + std::pow(1.0 - a, q)) / (q * ln2);
}

}  // namespace fluctana
