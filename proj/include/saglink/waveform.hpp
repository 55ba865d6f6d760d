#pragma once

#include <complex>
#include <cstdint>
#include <variant>
#include <vector>

#include "saglink/fft.hpp"

namespace saglink {

enum class WaveformFamily { OFDM, DFTS_OFDM, OTFS, AFDM, FMCW };

const char* family_name(WaveformFamily family);

struct OfdmGrid {
    int subcarriers = 0;
    int symbols = 0;
    int cp_length = 0;
};

struct DelayDopplerGrid {
    int delay_bins = 0;    // M
    int doppler_bins = 0;  // N
};

struct AfdmGrid {
    int subcarriers = 0;
    double c1 = 0.0;
    double c2 = 0.0;
};

struct FmcwGrid {
    double sweep_bandwidth_hz = 0.0;
    double duration_s = 0.0;
    bool up_chirp = true;
};

/// Complex baseband frame with its family-specific grid metadata.
struct WaveformFrame {
    cvec samples;
    double sample_rate_hz = 0.0;
    WaveformFamily family = WaveformFamily::OFDM;
    std::variant<OfdmGrid, DelayDopplerGrid, AfdmGrid, FmcwGrid> grid;
};

// --- OFDM / DFT-spread OFDM ------------------------------------------------
// Symbols are laid out symbol-major: symbol s occupies [s*N, (s+1)*N).
// N must be a power of two; cp_length in [0, N).

WaveformFrame ofdm_modulate(const cvec& symbols, int subcarriers, int cp_length,
                            double sample_rate_hz);
cvec ofdm_demodulate(const WaveformFrame& frame);

/// DFT spreading ahead of the subcarrier mapping (single-carrier envelope).
WaveformFrame dfts_modulate(const cvec& symbols, int subcarriers, int cp_length,
                            double sample_rate_hz);
cvec dfts_demodulate(const WaveformFrame& frame);

// --- OTFS -------------------------------------------------------------------
// Delay-Doppler grid stored delay-major: dd[k * N + l] = X[k, l] for delay bin
// k in [0, M) and Doppler bin l in [0, N). The frame holds N time symbols of
// M samples each.

WaveformFrame otfs_modulate(const cvec& dd_symbols, int delay_bins, int doppler_bins,
                            double sample_rate_hz);
cvec otfs_demodulate(const WaveformFrame& frame);

/// Inverse symplectic finite Fourier transform (delay-Doppler -> time-freq).
cvec isfft(const cvec& dd_grid, int delay_bins, int doppler_bins);
cvec sfft(const cvec& tf_grid, int delay_bins, int doppler_bins);

// --- AFDM -------------------------------------------------------------------
// x = Lambda_c1^H F^H Lambda_c2^H s with Lambda_c = diag(exp(-j 2 pi c n^2)).
// c1 = c2 = 0 reduces to the plain inverse-DFT (OFDM core, no CP).

WaveformFrame afdm_modulate(const cvec& symbols, double c1, double c2,
                            double sample_rate_hz);
cvec afdm_demodulate(const WaveformFrame& frame);

/// Chirp-rate tuning for a maximum normalized Doppler of nu_max grid bins:
/// c1 = (2 nu_max + 1) / (2 N).
double afdm_c1_for_doppler(int subcarriers, int max_doppler_bins);

// --- FMCW -------------------------------------------------------------------

/// Linear chirp exp(+-j pi (B/T) t^2) over [0, T). Complex baseband requires
/// sample_rate >= sweep bandwidth; violating that is a config error.
WaveformFrame fmcw_chirp(double sweep_bandwidth_hz, double duration_s,
                         double sample_rate_hz, bool up_chirp = true);

// --- Metrics ----------------------------------------------------------------

/// Peak-to-average power ratio, dB. Throws std::domain_error on an all-zero
/// frame.
double papr_db(const WaveformFrame& frame);

struct AmbiguitySurface {
    std::vector<double> delay_axis_s;
    std::vector<double> doppler_axis_hz;
    std::vector<double> magnitude;  // row-major [delay][doppler], peak = 1
    std::size_t peak_delay_index = 0;
    std::size_t peak_doppler_index = 0;

    double at(std::size_t delay_idx, std::size_t doppler_idx) const {
        return magnitude[delay_idx * doppler_axis_hz.size() + doppler_idx];
    }
};

/// |sum_t s(t) s*(t - tau) e^(-j 2 pi nu t)| on the given grid, peak-normalized.
/// Delays are rounded to the nearest sample lag and must stay within the frame.
AmbiguitySurface ambiguity(const WaveformFrame& frame,
                           const std::vector<double>& delays_s,
                           const std::vector<double>& dopplers_hz);

/// Cross-ambiguity of a received frame against a reference waveform.
AmbiguitySurface cross_ambiguity(const cvec& received, const cvec& reference,
                                 double sample_rate_hz,
                                 const std::vector<double>& delays_s,
                                 const std::vector<double>& dopplers_hz);

/// First-order Doppler shift fc * v / c.
double doppler_shift_hz(double carrier_hz, double velocity_m_s);

// --- Monte Carlo PAPR sweep ---------------------------------------------------

struct PaprSweepResult {
    std::vector<double> papr_db;  // one entry per frame, frame order
    double percentile(double p) const;
};

/// Seeded random-QPSK PAPR statistics on 4x oversampled waveforms. Frame i
/// derives its own generator from (seed, i), so results are identical for
/// any worker count.
PaprSweepResult papr_sweep(WaveformFamily family, int subcarriers, int frames,
                           std::uint64_t seed, int oversample = 4, int jobs = 1);

}  // namespace saglink
