#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace vcarl {

using cplx = std::complex<double>;

// Unnormalized complex DFT.
//   forward:  X[m] = sum_k x[k] exp(-2 pi i k m / N)
//   backward: x[k] = sum_m X[m] exp(+2 pi i k m / N)
// Plans are created with FFTW_ESTIMATE so results are reproducible bit for bit.
void fft_forward(std::vector<cplx>& data);
void fft_backward(std::vector<cplx>& data);

std::size_t next_pow2(std::size_t n);

} // namespace vcarl
