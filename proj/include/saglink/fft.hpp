#pragma once

#include <complex>
#include <vector>

namespace saglink {

using cvec = std::vector<std::complex<double>>;

/// Unitary DFT (1/sqrt(N) scaling in both directions), any length >= 1.
/// Thread-safe: FFTW plans are cached per (size, direction) behind a lock,
/// execution runs concurrently on caller buffers.
cvec fft_unitary(const cvec& in, bool inverse);

}  // namespace saglink
