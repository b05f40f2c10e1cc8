#include "fluctana/fft.hpp"

#include <cmath>
#include <cstddef>

namespace fluctana::fft {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place radix-2; invert only flips the twiddle sign (no 1/N scaling).
void radix2(std::vector<cplx>& a, bool invert) {
    const std::size_t n = a.size();
    if (n < 2) return;
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    // one exact twiddle table for the full size; inner levels stride into it
    std::vector<cplx> tw(n / 2);
    const double sign = invert ? 1.0 : -1.0;
    for (std::size_t j = 0; j < n / 2; ++j) {
        const double ang = sign * 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
        tw[j] = cplx(std::cos(ang), std::sin(ang));
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cplx w = tw[j * stride];
                const cplx u = a[i + j];
                const cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
            }
        }
    }
}

// Bluestein chirp-z: forward DFT of arbitrary length via a power-of-two
// circular convolution. Chirp phases use k^2 mod 2n to stay accurate.
void bluestein(std::vector<cplx>& a) {
    const std::size_t n = a.size();
    std::size_t m = 1;
    while (m < 2 * n - 1) m <<= 1;

    std::vector<cplx> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t k2 = (k * k) % (2 * n);
        const double ang = -kPi * static_cast<double>(k2) / static_cast<double>(n);
        chirp[k] = cplx(std::cos(ang), std::sin(ang));
    }

    std::vector<cplx> fa(m, cplx(0.0, 0.0));
    std::vector<cplx> fb(m, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < n; ++k) fa[k] = a[k] * chirp[k];
    fb[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) fb[k] = fb[m - k] = std::conj(chirp[k]);

    radix2(fa, false);
    radix2(fb, false);
    for (std::size_t j = 0; j < m; ++j) fa[j] *= fb[j];
    radix2(fa, true);

    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < n; ++k) a[k] = fa[k] * chirp[k] * scale;
}

}  // namespace

void forward(std::vector<cplx>& x) {
    if (x.size() < 2) return;
    if (is_pow2(x.size())) {
        radix2(x, false);
    } else {
        bluestein(x);
    }
}

void inverse(std::vector<cplx>& x) {
    const std::size_t n = x.size();
    if (n < 2) return;
    for (auto& v : x) v = std::conj(v);
    forward(x);
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& v : x) v = std::conj(v) * scale;
}

std::vector<cplx> forward_real(std::span<const double> x) {
    std::vector<cplx> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = cplx(x[i], 0.0);
    forward(out);
    return out;
}

}  // namespace fluctana::fft
