#pragma once

#include <complex>
#include <span>
#include <vector>

namespace fluctana {

struct MorletParams {
    double omega0 = 6.0;          // >= 5 keeps the zero-mean approximation admissible
    std::vector<double> scales;   // strictly increasing, in samples
};

// Fourier wavelength of the Morlet wavelet at scale s: 4*pi*s/(w0+sqrt(2+w0^2)),
// about 1.03*s at the default center frequency.
double fourier_wavelength(double scale, double omega0);

// Fractional-dyadic scale grid s_j = s_min * 2^(j/voices) covering
// [s_min, s_max]; s_max = 0 selects n/2.
std::vector<double> dyadic_scales(std::size_t signal_length, double s_min = 2.0, double s_max = 0.0,
                                  int voices = 8);

struct Scalogram {
    std::vector<double> scales;
    std::vector<double> fourier_wavelengths;
    std::size_t time_len = 0;
    double omega0 = 6.0;
    std::vector<std::complex<double>> coeff;  // row-major (scale, time)

    const std::complex<double>& at(std::size_t scale_idx, std::size_t t) const {
        return coeff[scale_idx * time_len + t];
    }
    std::size_t scale_count() const { return scales.size(); }
};

enum class CwtBackend {
    fft,     // frequency-domain product with the analytic Morlet transform
    direct,  // periodized time-domain correlation with the sampled wavelet
};

// W_n(s) = sum_n' x_n' * s^{-1/2} psi*((n'-n)/s), periodic in time. The two
// backends are independent routes to the same coefficients and agree to
// better than 1e-6 in relative terms.
Scalogram morlet_cwt(std::span<const double> signal, const MorletParams& params,
                     CwtBackend backend = CwtBackend::fft, int threads = 1);

enum class MarginalMode {
    scale_marginal,  // E(s) = sum_n |W_n(s)|^2, the global wavelet spectrum
    time_marginal,   // T(n) = sum_s |W_n(s)|^2
};

std::vector<double> periodogram(const Scalogram& sg, MarginalMode mode);

struct DominantScale {
    double scale = 0.0;
    double wavelength = 0.0;
    double energy = 0.0;
};

// The k largest strict local maxima of a scale marginal, ties broken toward
// the smaller scale. Throws when the marginal has no interior maximum.
std::vector<DominantScale> dominant_scales(std::span<const double> marginal, std::span<const double> scales,
                                           int k, double omega0 = 6.0);

// Largest trustworthy scale per time index (e-folding distance from the
// nearer edge): min(t+1, n-t) / sqrt(2).
std::vector<double> cone_of_influence(std::size_t signal_length);

}  // namespace fluctana
