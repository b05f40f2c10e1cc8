#include "fluctana/spectrum.hpp"

#include <cmath>

#include "fluctana/errors.hpp"
#include "fluctana/fft.hpp"
#include "fluctana/stats.hpp"

namespace fluctana {

PowerSpectrum power_spectrum(const Profile& profile) {
    const std::size_t n = profile.size();
    if (n < 16) throw ValidationError("power spectrum needs at least 16 samples, got " + std::to_string(n));

    const double m = mean(profile.values);
    std::vector<fft::cplx> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = fft::cplx(profile.values[i] - m, 0.0);
    fft::forward(x);

    PowerSpectrum out;
    out.source_length = n;
    const std::size_t half = n / 2;
    out.frequencies.resize(half);
    out.power.resize(half);
    for (std::size_t k = 1; k <= half; ++k) {
        out.frequencies[k - 1] = static_cast<double>(k) / static_cast<double>(n);
        out.power[k - 1] = std::norm(x[k]) / static_cast<double>(n);
    }
    return out;
}

PowerSpectrum fit_alpha(PowerSpectrum spectrum, std::optional<FrequencyBand> band, int log_bins) {
    FrequencyBand b = band.value_or(FrequencyBand{0.0, 0.0});
    if (b.lo <= 0.0) b.lo = 4.0 / static_cast<double>(spectrum.source_length);
    if (b.hi <= 0.0) b.hi = 0.125;
    if (!(b.lo < b.hi) || b.hi > 0.5) throw ValidationError("invalid spectral fit band");

    std::vector<double> lf, lp;
    for (std::size_t i = 0; i < spectrum.frequencies.size(); ++i) {
        const double f = spectrum.frequencies[i];
        if (f < b.lo || f > b.hi) continue;
        const double p = spectrum.power[i];
        if (!std::isfinite(p)) throw DegenerateError("non-finite power in fit band");
        if (p <= 0.0) throw DegenerateError("zero power in fit band (degenerate input)");
        lf.push_back(std::log(f));
        lp.push_back(std::log(p));
    }
    if (lf.size() < 8) throw ValidationError("fewer than 8 spectral bins in the fit band");

    std::vector<double> fx, fy;
    if (log_bins > 0) {
        // geometric bins de-weight the dense high-frequency end
        const double llo = std::log(b.lo);
        const double lhi = std::log(b.hi);
        std::vector<double> sx(static_cast<std::size_t>(log_bins), 0.0);
        std::vector<double> sy(static_cast<std::size_t>(log_bins), 0.0);
        std::vector<long> cnt(static_cast<std::size_t>(log_bins), 0);
        for (std::size_t i = 0; i < lf.size(); ++i) {
            int bin = static_cast<int>(std::floor((lf[i] - llo) / (lhi - llo) * log_bins));
            bin = std::min(std::max(bin, 0), log_bins - 1);
            sx[static_cast<std::size_t>(bin)] += lf[i];
            sy[static_cast<std::size_t>(bin)] += lp[i];
            ++cnt[static_cast<std::size_t>(bin)];
        }
        for (int i = 0; i < log_bins; ++i) {
            if (cnt[static_cast<std::size_t>(i)] == 0) continue;
            fx.push_back(sx[static_cast<std::size_t>(i)] / static_cast<double>(cnt[static_cast<std::size_t>(i)]));
            fy.push_back(sy[static_cast<std::size_t>(i)] / static_cast<double>(cnt[static_cast<std::size_t>(i)]));
        }
        if (fx.size() < 3) throw ValidationError("fewer than 3 populated log bins in the fit band");
    } else {
        fx = lf;
        fy = lp;
    }

    const double n = static_cast<double>(fx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < fx.size(); ++i) {
        mx += fx[i];
        my += fy[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < fx.size(); ++i) {
        sxx += (fx[i] - mx) * (fx[i] - mx);
        sxy += (fx[i] - mx) * (fy[i] - my);
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double sse = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < fx.size(); ++i) {
        const double r = fy[i] - (intercept + slope * fx[i]);
        sse += r * r;
        syy += (fy[i] - my) * (fy[i] - my);
    }

    spectrum.fitted = true;
    spectrum.alpha = -slope;
    spectrum.alpha_stderr = n > 2.0 ? std::sqrt(sse / (n - 2.0) / sxx) : 0.0;
    spectrum.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    spectrum.fit_band = b;
    spectrum.log_bins = log_bins;
    return spectrum;
}

Consistency consistency_check(double alpha, double hurst, double tolerance) {
    Consistency c;
    c.predicted_alpha = 2.0 * hurst + 1.0;
    c.gap = std::abs(alpha - c.predicted_alpha);
    c.consistent = c.gap <= tolerance;
    return c;
}

}  // namespace fluctana
