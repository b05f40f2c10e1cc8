// Independent reference implementations used as test oracles. These stay
// deliberately naive (quadratic DFT, literal moment sums, unscaled normal
// equations) and share no code with the library paths they check.
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace oracles {

constexpr double kPi = 3.14159265358979323846;

// O(n^2) DFT, the reference for the fft module.
inline std::vector<std::complex<double>> naive_dft(std::span<const std::complex<double>> x) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = -2.0 * kPi * static_cast<double>(k) * static_cast<double>(j) / static_cast<double>(n);
            acc += x[j] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

// Literal bidirectional segment fluctuation function: forward segments
// 1..M, backward segments M+1..2M, F^2 = segment mean square, then the
// q/2 power mean with exponent 1/q; q = 0 via exp((1/(4M)) * sum ln F^2).
inline double brute_fq(std::span<const double> fluct, long scale, double q) {
    const long n = static_cast<long>(fluct.size());
    const long m = n / scale;
    std::vector<double> f2;
    for (long b = 0; b < m; ++b) {
        double acc = 0.0;
        for (long i = b * scale; i < (b + 1) * scale; ++i) acc += fluct[i] * fluct[i];
        f2.push_back(acc / static_cast<double>(scale));
    }
    for (long b = 0; b < m; ++b) {
        double acc = 0.0;
        for (long i = n - (b + 1) * scale; i < n - b * scale; ++i) acc += fluct[i] * fluct[i];
        f2.push_back(acc / static_cast<double>(scale));
    }
    if (q == 0.0) {
        double acc = 0.0;
        for (double v : f2) acc += std::log(v);
        return std::exp(acc / (4.0 * static_cast<double>(m)));
    }
    double acc = 0.0;
    for (double v : f2) acc += std::pow(v, 0.5 * q);
    return std::pow(acc / (2.0 * static_cast<double>(m)), 1.0 / q);
}

// Least-squares polynomial fit through plain (unscaled) normal equations
// solved by Gaussian elimination with partial pivoting; returns the mean
// squared residual over the segment.
inline double brute_poly_residual(std::span<const double> seg, int order) {
    const int dim = order + 1;
    const long n = static_cast<long>(seg.size());
    std::vector<double> a(static_cast<std::size_t>(dim) * dim, 0.0);
    std::vector<double> rhs(static_cast<std::size_t>(dim), 0.0);
    for (long t = 0; t < n; ++t) {
        double powers[8];
        powers[0] = 1.0;
        for (int j = 1; j < dim; ++j) powers[j] = powers[j - 1] * static_cast<double>(t);
        for (int r = 0; r < dim; ++r) {
            rhs[r] += powers[r] * seg[t];
            for (int c = 0; c < dim; ++c) a[static_cast<std::size_t>(r) * dim + c] += powers[r] * powers[c];
        }
    }
    // gaussian elimination with partial pivoting
    std::vector<int> perm(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) perm[i] = i;
    for (int col = 0; col < dim; ++col) {
        int pivot = col;
        for (int r = col + 1; r < dim; ++r)
            if (std::abs(a[static_cast<std::size_t>(r) * dim + col]) > std::abs(a[static_cast<std::size_t>(pivot) * dim + col]))
                pivot = r;
        for (int c = 0; c < dim; ++c) std::swap(a[static_cast<std::size_t>(col) * dim + c], a[static_cast<std::size_t>(pivot) * dim + c]);
        std::swap(rhs[col], rhs[pivot]);
        for (int r = col + 1; r < dim; ++r) {
            const double f = a[static_cast<std::size_t>(r) * dim + col] / a[static_cast<std::size_t>(col) * dim + col];
            for (int c = col; c < dim; ++c) a[static_cast<std::size_t>(r) * dim + c] -= f * a[static_cast<std::size_t>(col) * dim + c];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<double> coef(static_cast<std::size_t>(dim), 0.0);
    for (int r = dim - 1; r >= 0; --r) {
        double s = rhs[r];
        for (int c = r + 1; c < dim; ++c) s -= a[static_cast<std::size_t>(r) * dim + c] * coef[c];
        coef[r] = s / a[static_cast<std::size_t>(r) * dim + r];
    }
    double acc = 0.0;
    for (long t = 0; t < n; ++t) {
        double fit = 0.0, p = 1.0;
        for (int j = 0; j < dim; ++j) {
            fit += coef[j] * p;
            p *= static_cast<double>(t);
        }
        const double r = seg[t] - fit;
        acc += r * r;
    }
    return acc / static_cast<double>(n);
}

// Literal MF-DFA fluctuation function built from brute_poly_residual.
inline double brute_mfdfa_fq(std::span<const double> profile, long scale, int order, double q) {
    const long n = static_cast<long>(profile.size());
    const long m = n / scale;
    std::vector<double> f2;
    for (long b = 0; b < m; ++b)
        f2.push_back(brute_poly_residual(profile.subspan(static_cast<std::size_t>(b * scale),
                                                         static_cast<std::size_t>(scale)), order));
    for (long b = 0; b < m; ++b)
        f2.push_back(brute_poly_residual(profile.subspan(static_cast<std::size_t>(n - (b + 1) * scale),
                                                         static_cast<std::size_t>(scale)), order));
    if (q == 0.0) {
        double acc = 0.0;
        for (double v : f2) acc += std::log(v);
        return std::exp(acc / (4.0 * static_cast<double>(m)));
    }
    double acc = 0.0;
    for (double v : f2) acc += std::pow(v, 0.5 * q);
    return std::pow(acc / (2.0 * static_cast<double>(m)), 1.0 / q);
}

// Exact dyadic partition function of the binomial cascade. The sum over a
// dyadic block collapses analytically, so the log-log slope of
// sum_b |block sum|^q against the block size is exact at any k.
inline double cascade_partition_slope(std::span<const double> cascade, double q) {
    const std::size_t n = cascade.size();
    std::vector<double> lnz, lns;
    for (std::size_t s = 2; s <= n / 4; s *= 2) {
        double z = 0.0;
        for (std::size_t b = 0; b < n / s; ++b) {
            double sum = 0.0;
            for (std::size_t i = b * s; i < (b + 1) * s; ++i) sum += cascade[i];
            z += std::pow(std::abs(sum), q);
        }
        lnz.push_back(std::log(z));
        lns.push_back(std::log(static_cast<double>(s)));
    }
    // least squares slope
    const double count = static_cast<double>(lns.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lns.size(); ++i) {
        mx += lns[i];
        my += lnz[i];
    }
    mx /= count;
    my /= count;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lns.size(); ++i) {
        sxx += (lns[i] - mx) * (lns[i] - mx);
        sxy += (lns[i] - mx) * (lnz[i] - my);
    }
    return sxy / sxx;  // equals q*h(q) - 1 for the cascade
}

// fGn autocovariance at integer lag.
inline double fgn_gamma(double h, double lag) {
    const double e = 2.0 * h;
    return 0.5 * (std::pow(std::abs(lag + 1.0), e) - 2.0 * std::pow(std::abs(lag), e) +
                  std::pow(std::abs(lag - 1.0), e));
}

}  // namespace oracles
