#include "fluctana/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>

#include "fluctana/errors.hpp"
#include "fluctana/parallel.hpp"

namespace fluctana {

const char* to_string(WaveletFamily f) {
    return f == WaveletFamily::haar ? "haar" : "daubechies";
}

const char* to_string(Boundary b) {
    return b == Boundary::periodic ? "periodic" : "symmetric";
}

Boundary boundary_from_string(const std::string& s) {
    if (s == "periodic") return Boundary::periodic;
    if (s == "symmetric") return Boundary::symmetric;
    throw ValidationError("unknown boundary '" + s + "' (expected periodic or symmetric)");
}

std::pair<WaveletFamily, int> parse_wavelet_name(const std::string& name) {
    if (name == "haar") return {WaveletFamily::haar, 2};
    if (name.rfind("db", 0) == 0) {
        const int taps = std::atoi(name.c_str() + 2);
        if (taps <= 0) throw ValidationError("cannot parse wavelet name '" + name + "'");
        return {WaveletFamily::daubechies, taps};
    }
    throw ValidationError("unknown wavelet '" + name + "' (expected haar or dbN)");
}

std::string WaveletFilter::name() const {
    return family == WaveletFamily::haar ? "haar" : "db" + std::to_string(order);
}

namespace {

using cld = std::complex<long double>;

// Durand-Kerner roots of a polynomial with ascending real coefficients.
std::vector<cld> poly_roots(const std::vector<long double>& coef) {
    const std::size_t deg = coef.size() - 1;
    std::vector<cld> monic(coef.size());
    for (std::size_t i = 0; i < coef.size(); ++i) monic[i] = cld(coef[i] / coef[deg]);
    auto eval = [&](cld x) {
        cld r(0.0L);
        for (std::size_t i = coef.size(); i-- > 0;) r = r * x + monic[i];
        return r;
    };
    std::vector<cld> roots(deg);
    cld w(0.4L, 0.9L);
    cld p(1.0L);
    for (auto& r : roots) {
        p *= w;
        r = p;
    }
    for (int iter = 0; iter < 500; ++iter) {
        long double worst = 0.0L;
        for (std::size_t i = 0; i < deg; ++i) {
            cld denom(1.0L);
            for (std::size_t j = 0; j < deg; ++j)
                if (j != i) denom *= roots[i] - roots[j];
            const cld delta = eval(roots[i]) / denom;
            roots[i] -= delta;
            worst = std::max(worst, std::abs(delta));
        }
        if (worst < 1e-30L) break;
    }
    return roots;
}

// Daubechies low-pass taps (tap count = 2k, k vanishing moments) via
// spectral factorization: roots of P(y) = sum_m C(k-1+m, m) y^m are mapped
// to z-plane roots of z^2-(2-4y)z+1, the minimum-phase half is kept, and the
// polynomial sqrt(2)*((1+z)/2)^k * prod(z - z_i) is expanded in long double.
std::vector<double> daubechies_taps(int taps) {
    const int k = taps / 2;
    if (k == 1) {
        const double c = 1.0 / std::sqrt(2.0);
        return {c, c};
    }

    std::vector<long double> P(static_cast<std::size_t>(k));
    P[0] = 1.0L;
    for (int m = 1; m < k; ++m) P[m] = P[m - 1] * static_cast<long double>(k - 1 + m) / static_cast<long double>(m);

    const auto yroots = poly_roots(P);

    std::vector<cld> poly{cld(1.0L)};
    auto mul_linear = [&poly](cld root) {  // multiply by (z - root)
        std::vector<cld> next(poly.size() + 1, cld(0.0L));
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i + 1] += poly[i];
            next[i] -= poly[i] * root;
        }
        poly.swap(next);
    };
    for (int i = 0; i < k; ++i) mul_linear(cld(-1.0L));  // (1+z)^k
    for (const cld& y : yroots) {
        const cld w = cld(2.0L) - cld(4.0L) * y;
        const cld disc = std::sqrt(w * w - cld(4.0L));
        const cld z1 = (w + disc) / cld(2.0L);
        const cld z2 = (w - disc) / cld(2.0L);
        const cld zbig = std::abs(z1) >= std::abs(z2) ? z1 : z2;
        mul_linear(cld(1.0L) / zbig);  // z1*z2 = 1; small root from the large one
    }

    long double sum = 0.0L;
    for (const auto& c : poly) sum += c.real();
    const long double scale = std::sqrt(2.0L) / sum;
    std::vector<double> h(poly.size());
    for (std::size_t i = 0; i < poly.size(); ++i)
        h[poly.size() - 1 - i] = static_cast<double>(poly[i].real() * scale);  // minimum-phase ordering
    return h;
}

std::vector<double> mirror_highpass(const std::vector<double>& h) {
    const std::size_t L = h.size();
    std::vector<double> g(L);
    for (std::size_t i = 0; i < L; ++i) g[i] = (i % 2 == 0 ? 1.0 : -1.0) * h[L - 1 - i];
    return g;
}

struct LevelCoeffs {
    std::vector<double> approx;
    std::vector<double> detail;
};

// One periodic analysis step. Odd input lengths are padded with a single
// trailing zero; the pad is dropped again on inversion.
LevelCoeffs dwt_periodic(std::span<const double> x, const WaveletFilter& f) {
    const std::size_t n = x.size();
    const std::size_t ne = n + (n % 2);
    const std::size_t half = ne / 2;
    LevelCoeffs out;
    out.approx.assign(half, 0.0);
    out.detail.assign(half, 0.0);
    for (std::size_t i = 0; i < half; ++i) {
        double a = 0.0, d = 0.0;
        for (int j = 0; j < f.order; ++j) {
            const std::size_t m = (2 * i + static_cast<std::size_t>(j)) % ne;
            const double v = m < n ? x[m] : 0.0;
            a += f.lowpass[static_cast<std::size_t>(j)] * v;
            d += f.highpass[static_cast<std::size_t>(j)] * v;
        }
        out.approx[i] = a;
        out.detail[i] = d;
    }
    return out;
}

std::vector<double> idwt_periodic(std::span<const double> a, std::span<const double> d, const WaveletFilter& f,
                                  std::size_t out_len) {
    const std::size_t ne = 2 * a.size();
    std::vector<double> x(ne, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (int j = 0; j < f.order; ++j) {
            const std::size_t m = (2 * i + static_cast<std::size_t>(j)) % ne;
            x[m] += f.lowpass[static_cast<std::size_t>(j)] * a[i] + f.highpass[static_cast<std::size_t>(j)] * d[i];
        }
    }
    x.resize(out_len);
    return x;
}

double reflect_at(std::span<const double> x, long p) {
    const long n = static_cast<long>(x.size());
    while (p < 0 || p >= n) {
        if (p < 0) p = -p - 1;
        if (p >= n) p = 2 * n - 1 - p;
    }
    return x[static_cast<std::size_t>(p)];
}

// Reflect-extend by order-1 samples per side (one extra on the right when
// needed to stay even), then run the periodic step on the extension.
std::vector<double> sym_extend(std::span<const double> x, int order) {
    const long pad = order - 1;
    long total = static_cast<long>(x.size()) + 2 * pad;
    const long extra = total % 2;
    std::vector<double> ext(static_cast<std::size_t>(total + extra));
    for (long i = 0; i < total + extra; ++i) ext[static_cast<std::size_t>(i)] = reflect_at(x, i - pad);
    return ext;
}

LevelCoeffs dwt_symmetric(std::span<const double> x, const WaveletFilter& f) {
    return dwt_periodic(sym_extend(x, f.order), f);
}

std::vector<double> idwt_symmetric(std::span<const double> a, std::span<const double> d, const WaveletFilter& f,
                                   std::size_t out_len) {
    const std::size_t pad = static_cast<std::size_t>(f.order - 1);
    std::vector<double> ext = idwt_periodic(a, d, f, 2 * a.size());
    std::vector<double> x(out_len);
    for (std::size_t i = 0; i < out_len; ++i) x[i] = ext[i + pad];
    return x;
}

}  // namespace

WaveletFilter make_filter(WaveletFamily family, int order) {
    if (family == WaveletFamily::haar) {
        if (order != 2) throw ValidationError("haar filter has exactly 2 taps, got order " + std::to_string(order));
    } else {
        if (order < 2 || order > 20 || order % 2 != 0)
            throw ValidationError("daubechies order (tap count) must be even and in [2, 20], got " +
                                  std::to_string(order));
    }
    WaveletFilter f;
    f.family = family;
    f.order = order;
    f.lowpass = daubechies_taps(order);
    f.highpass = mirror_highpass(f.lowpass);
    return f;
}

Decomposition decompose(std::span<const double> signal, const WaveletFilter& filter, int levels, Boundary boundary) {
    const std::size_t n = signal.size();
    if (levels < 1) throw ValidationError("decomposition needs at least 1 level");
    if (n < static_cast<std::size_t>(filter.order))
        throw ValidationError("signal shorter than the filter (" + std::to_string(n) + " < " +
                              std::to_string(filter.order) + ")");
    if (levels >= 63 || (static_cast<std::size_t>(1) << levels) > n)
        throw ValidationError("too many levels: 2^" + std::to_string(levels) + " exceeds signal length " +
                              std::to_string(n));

    Decomposition out;
    out.levels = levels;
    out.boundary = boundary;
    out.original_length = n;
    out.filter = filter;
    out.details.resize(static_cast<std::size_t>(levels));
    out.level_lengths.resize(static_cast<std::size_t>(levels));

    std::vector<double> current(signal.begin(), signal.end());
    for (int L = 0; L < levels; ++L) {
        out.level_lengths[static_cast<std::size_t>(L)] = current.size();
        LevelCoeffs c = boundary == Boundary::periodic ? dwt_periodic(current, filter) : dwt_symmetric(current, filter);
        out.details[static_cast<std::size_t>(L)] = std::move(c.detail);
        current = std::move(c.approx);
    }
    out.approx = std::move(current);
    return out;
}

std::vector<double> reconstruct(const Decomposition& decomp, int keep_details_above_level) {
    if (keep_details_above_level < 0 || keep_details_above_level > decomp.levels)
        throw ValidationError("keep_details_above_level out of range [0, " + std::to_string(decomp.levels) + "]");

    std::vector<double> a = decomp.approx;
    std::vector<double> zeros;
    for (int L = decomp.levels - 1; L >= 0; --L) {
        const auto& det = decomp.details[static_cast<std::size_t>(L)];
        const bool zeroed = L < keep_details_above_level;
        if (zeroed) zeros.assign(det.size(), 0.0);
        std::span<const double> d = zeroed ? std::span<const double>(zeros) : std::span<const double>(det);
        const std::size_t out_len = decomp.level_lengths[static_cast<std::size_t>(L)];
        a = decomp.boundary == Boundary::periodic ? idwt_periodic(a, d, decomp.filter, out_len)
                                                  : idwt_symmetric(a, d, decomp.filter, out_len);
    }
    return a;
}

long level_scale(int filter_order, int level) {
    return static_cast<long>(filter_order - 1) * ((1L << level) - 1L) + 1L;
}

FluctuationSet extract_fluctuations(const Profile& profile, const WaveletFilter& filter, int max_level,
                                    Boundary boundary, int threads) {
    const auto& y = profile.values;
    Decomposition fwd = decompose(y, filter, max_level, boundary);
    std::vector<double> rev(y.rbegin(), y.rend());
    Decomposition bwd = decompose(rev, filter, max_level, boundary);

    FluctuationSet out;
    out.levels.resize(static_cast<std::size_t>(max_level));
    parallel_for(static_cast<std::size_t>(max_level), threads, [&](std::size_t idx) {
        const int L = static_cast<int>(idx) + 1;
        const std::vector<double> trend_fwd = reconstruct(fwd, L);
        const std::vector<double> trend_rev = reconstruct(bwd, L);
        FluctuationLevel& lv = out.levels[idx];
        lv.level = L;
        lv.scale = level_scale(filter.order, L);
        const std::size_t n = y.size();
        lv.trend.resize(n);
        lv.fluctuation.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            lv.trend[i] = 0.5 * (trend_fwd[i] + trend_rev[n - 1 - i]);
            lv.fluctuation[i] = y[i] - lv.trend[i];
        }
    });
    return out;
}

}  // namespace fluctana
