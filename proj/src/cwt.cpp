#include "fluctana/cwt.hpp"

#include <algorithm>
#include <cmath>

#include "fluctana/errors.hpp"
#include "fluctana/fft.hpp"
#include "fluctana/parallel.hpp"

namespace fluctana {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kQuartRootPi = 0.75112554446494245;  // pi^(-1/4)

void validate_params(std::size_t n, const MorletParams& p) {
    if (n < 2) throw ValidationError("cwt needs at least 2 samples");
    if (p.omega0 < 5.0) throw ValidationError("omega0 must be >= 5 for an admissible (zero-mean) Morlet wavelet");
    if (p.scales.empty()) throw ValidationError("empty scale grid");
    double prev = 0.0;
    for (double s : p.scales) {
        if (!(s > prev)) throw ValidationError("scales must be positive and strictly increasing");
        if (s > static_cast<double>(n))
            throw ValidationError("scale " + std::to_string(s) + " exceeds signal length " + std::to_string(n));
        prev = s;
    }
}

// DFT of the sampled, periodized wavelet at scale s via Poisson summation:
// the analytic transform sqrt(2*pi*s) * pi^{-1/4} * exp(-(s*w-w0)^2/2) summed
// over frequency aliases w + 2*pi*m. Only small scales (s < ~4 at w0 = 6)
// pick up alias mass; without the sum the frequency route would diverge from
// the sampled time-domain convolution exactly there. The w0 >= 5 zero-mean
// correction term is below 1e-8 and is dropped.
double kernel_hat(double s, double w, double omega0) {
    const int reach = static_cast<int>(std::ceil(((40.0 + omega0) / s + kPi) / (2.0 * kPi))) + 1;
    double acc = 0.0;
    for (int m = -reach; m <= reach; ++m) {
        const double u = s * (w + 2.0 * kPi * static_cast<double>(m)) - omega0;
        if (std::abs(u) < 40.0) acc += std::exp(-0.5 * u * u);
    }
    return std::sqrt(2.0 * kPi * s) * kQuartRootPi * acc;
}

void cwt_fft(std::span<const double> signal, const MorletParams& p, Scalogram& out, int threads) {
    const std::size_t n = signal.size();
    const std::vector<fft::cplx> spectrum = fft::forward_real(signal);
    parallel_for(p.scales.size(), threads, [&](std::size_t si) {
        const double s = p.scales[si];
        std::vector<fft::cplx> row(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double w = 2.0 * kPi * (k <= n / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n)) /
                             static_cast<double>(n);
            row[k] = spectrum[k] * kernel_hat(s, w, p.omega0);
        }
        fft::inverse(row);
        std::copy(row.begin(), row.end(), out.coeff.begin() + static_cast<std::ptrdiff_t>(si * n));
    });
}

void cwt_direct(std::span<const double> signal, const MorletParams& p, Scalogram& out, int threads) {
    const std::size_t n = signal.size();
    parallel_for(p.scales.size(), threads, [&](std::size_t si) {
        const double s = p.scales[si];
        const double cutoff = 9.0 * s;  // exp(-40.5) is below double noise
        // periodized sampled kernel: K[d] = sum_j s^{-1/2} psi*((d + j*n)/s)
        std::vector<fft::cplx> kernel(n, fft::cplx(0.0, 0.0));
        const double amp = kQuartRootPi / std::sqrt(s);
        const long jlo = static_cast<long>(std::floor((-cutoff) / static_cast<double>(n))) - 1;
        const long jhi = static_cast<long>(std::ceil(cutoff / static_cast<double>(n))) + 1;
        for (std::size_t d = 0; d < n; ++d) {
            fft::cplx acc(0.0, 0.0);
            for (long j = jlo; j <= jhi; ++j) {
                const double t = static_cast<double>(d) + static_cast<double>(j) * static_cast<double>(n);
                if (std::abs(t) > cutoff) continue;
                const double eta = t / s;
                const double env = amp * std::exp(-0.5 * eta * eta);
                const double phase = p.omega0 * eta;
                acc += fft::cplx(env * std::cos(phase), -env * std::sin(phase));  // conjugated wavelet
            }
            kernel[d] = acc;
        }
        for (std::size_t t = 0; t < n; ++t) {
            fft::cplx acc(0.0, 0.0);
            for (std::size_t d = 0; d < n; ++d) acc += signal[(t + d) % n] * kernel[d];
            out.coeff[si * n + t] = acc;
        }
    });
}

}  // namespace

double fourier_wavelength(double scale, double omega0) {
    return 4.0 * kPi * scale / (omega0 + std::sqrt(2.0 + omega0 * omega0));
}

std::vector<double> dyadic_scales(std::size_t signal_length, double s_min, double s_max, int voices) {
    if (s_min <= 0.0) throw ValidationError("scale grid minimum must be positive");
    if (voices < 1) throw ValidationError("voices per octave must be >= 1");
    if (s_max <= 0.0) s_max = static_cast<double>(signal_length) / 2.0;
    if (s_max < s_min) throw ValidationError("scale grid maximum below minimum");
    std::vector<double> scales;
    const double step = std::pow(2.0, 1.0 / static_cast<double>(voices));
    for (double s = s_min; s <= s_max * (1.0 + 1e-12); s *= step) scales.push_back(s);
    return scales;
}

Scalogram morlet_cwt(std::span<const double> signal, const MorletParams& params, CwtBackend backend, int threads) {
    validate_params(signal.size(), params);
    Scalogram out;
    out.scales = params.scales;
    out.omega0 = params.omega0;
    out.time_len = signal.size();
    out.fourier_wavelengths.resize(params.scales.size());
    for (std::size_t i = 0; i < params.scales.size(); ++i)
        out.fourier_wavelengths[i] = fourier_wavelength(params.scales[i], params.omega0);
    out.coeff.assign(params.scales.size() * signal.size(), fft::cplx(0.0, 0.0));
    if (backend == CwtBackend::fft) {
        cwt_fft(signal, params, out, threads);
    } else {
        cwt_direct(signal, params, out, threads);
    }
    return out;
}

std::vector<double> periodogram(const Scalogram& sg, MarginalMode mode) {
    if (mode == MarginalMode::scale_marginal) {
        std::vector<double> e(sg.scale_count(), 0.0);
        for (std::size_t si = 0; si < sg.scale_count(); ++si) {
            double acc = 0.0;
            for (std::size_t t = 0; t < sg.time_len; ++t) acc += std::norm(sg.at(si, t));
            e[si] = acc;
        }
        return e;
    }
    std::vector<double> e(sg.time_len, 0.0);
    for (std::size_t si = 0; si < sg.scale_count(); ++si)
        for (std::size_t t = 0; t < sg.time_len; ++t) e[t] += std::norm(sg.at(si, t));
    return e;
}

std::vector<DominantScale> dominant_scales(std::span<const double> marginal, std::span<const double> scales,
                                           int k, double omega0) {
    if (k < 1) throw ValidationError("dominant_scales needs k >= 1");
    if (marginal.size() != scales.size()) throw ValidationError("marginal and scale grid sizes differ");
    std::vector<DominantScale> peaks;
    for (std::size_t i = 1; i + 1 < marginal.size(); ++i) {
        if (marginal[i] > marginal[i - 1] && marginal[i] > marginal[i + 1])
            peaks.push_back({scales[i], fourier_wavelength(scales[i], omega0), marginal[i]});
    }
    if (peaks.empty()) throw DegenerateError("no local maxima in the scale marginal");
    std::stable_sort(peaks.begin(), peaks.end(), [](const DominantScale& a, const DominantScale& b) {
        if (a.energy != b.energy) return a.energy > b.energy;
        return a.scale < b.scale;
    });
    if (peaks.size() > static_cast<std::size_t>(k)) peaks.resize(static_cast<std::size_t>(k));
    return peaks;
}

std::vector<double> cone_of_influence(std::size_t signal_length) {
    std::vector<double> coi(signal_length);
    const double inv = 1.0 / std::sqrt(2.0);
    for (std::size_t t = 0; t < signal_length; ++t)
        coi[t] = static_cast<double>(std::min(t + 1, signal_length - t)) * inv;
    return coi;
}

}  // namespace fluctana
