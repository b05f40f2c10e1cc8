#pragma once

#include <optional>
#include <vector>

#include "fluctana/series.hpp"

namespace fluctana {

struct FrequencyBand {
    double lo = 0.0;  // cycles/sample
    double hi = 0.0;
};

struct PowerSpectrum {
    std::vector<double> frequencies;  // k/N for k = 1..floor(N/2); DC excluded
    std::vector<double> power;        // |X_k|^2 / N of the mean-subtracted profile
    std::size_t source_length = 0;

    bool fitted = false;
    double alpha = 0.0;         // P(f) ~ f^-alpha over the fit band
    double alpha_stderr = 0.0;
    double r2 = 0.0;
    FrequencyBand fit_band{};
    int log_bins = 0;           // 0 = unbinned fit
};

// One-sided periodogram of the mean-subtracted profile. Any length >= 16
// (the transform handles non-power-of-two sizes directly).
PowerSpectrum power_spectrum(const Profile& profile);

// Least squares of log P on log f over the band (default [4/N, 1/8]),
// after geometric binning into `log_bins` bins (0 fits the raw points).
PowerSpectrum fit_alpha(PowerSpectrum spectrum, std::optional<FrequencyBand> band = std::nullopt,
                        int log_bins = 16);

struct Consistency {
    double predicted_alpha = 0.0;  // 2H + 1
    double gap = 0.0;
    bool consistent = false;
};

Consistency consistency_check(double alpha, double hurst, double tolerance = 0.3);

}  // namespace fluctana
