#pragma once

#include <span>
#include <string>
#include <vector>

#include "fluctana/series.hpp"

namespace fluctana {

enum class WaveletFamily { haar, daubechies };
enum class Boundary { periodic, symmetric };

const char* to_string(WaveletFamily f);
const char* to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

// Parses "haar", "db4", "db6", ... into (family, tap count).
std::pair<WaveletFamily, int> parse_wavelet_name(const std::string& name);

// Orthogonal conjugate-mirror pair. `order` is the tap count.
struct WaveletFilter {
    WaveletFamily family = WaveletFamily::haar;
    int order = 2;
    std::vector<double> lowpass;
    std::vector<double> highpass;

    int vanishing_moments() const { return order / 2; }
    std::string name() const;
};

// Haar requires order 2. Daubechies supports tap counts 2,4,...,20; the
// coefficients are produced at call time by spectral factorization of the
// Daubechies half-band polynomial, carried out in long double.
WaveletFilter make_filter(WaveletFamily family, int order);

struct Decomposition {
    int levels = 0;
    std::vector<double> approx;                // deepest-level approximation
    std::vector<std::vector<double>> details;  // details[0] = level 1 (finest)
    Boundary boundary = Boundary::periodic;
    std::vector<std::size_t> level_lengths;    // input length entering each level
    std::size_t original_length = 0;
    WaveletFilter filter;
};

// Pyramid decomposition (convolve + downsample by 2).
//
// periodic:  wrap-around convolution; an odd-length input is zero-padded by
//            one sample for that level, which keeps the transform orthogonal
//            (exact reconstruction and Parseval against the original signal).
//            Coefficient counts are ceil(n/2) per level.
// symmetric: the level input is reflect-extended by order-1 samples on each
//            side before the periodic step and the extension is cropped on
//            inversion. Expansive (critical sampling cannot reconstruct
//            exactly with orthogonal taps under reflection), reconstruction
//            stays exact.
Decomposition decompose(std::span<const double> signal, const WaveletFilter& filter, int levels,
                        Boundary boundary = Boundary::periodic);

// Inverse pyramid. keep_details_above_level = L zeroes detail bands 1..L
// before inversion: L = 0 reproduces the input, L = levels yields the
// deepest low-pass trend.
std::vector<double> reconstruct(const Decomposition& decomp, int keep_details_above_level = 0);

// Support of the cascaded level-L low-pass kernel: (order-1)*(2^L-1)+1.
long level_scale(int filter_order, int level);

struct FluctuationLevel {
    int level = 0;
    long scale = 0;
    std::vector<double> trend;
    std::vector<double> fluctuation;
};

struct FluctuationSet {
    std::vector<FluctuationLevel> levels;
};

// Per level L: the trend is the low-pass reconstruction, computed on the
// profile and on its time reverse; the two fluctuation estimates are
// averaged, which cancels the asymmetric boundary artifacts of Daubechies
// kernels. trend + fluctuation == profile exactly at every level.
FluctuationSet extract_fluctuations(const Profile& profile, const WaveletFilter& filter, int max_level,
                                    Boundary boundary = Boundary::periodic, int threads = 1);

}  // namespace fluctana
