#pragma once

#include <complex>
#include <span>
#include <vector>

namespace fluctana::fft {

using cplx = std::complex<double>;

// In-place forward DFT, X_k = sum_n x_n exp(-2*pi*i*n*k/N).
// Iterative radix-2 for powers of two, Bluestein chirp-z otherwise.
void forward(std::vector<cplx>& x);

// In-place inverse DFT including the 1/N factor.
void inverse(std::vector<cplx>& x);

std::vector<cplx> forward_real(std::span<const double> x);

}  // namespace fluctana::fft
