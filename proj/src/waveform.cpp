#include "saglink/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

#include "saglink/constants.hpp"

namespace saglink {

const char* family_name(WaveformFamily family) {
    switch (family) {
        case WaveformFamily::OFDM: return "OFDM";
        case WaveformFamily::DFTS_OFDM: return "DFTS_OFDM";
        case WaveformFamily::OTFS: return "OTFS";
        case WaveformFamily::AFDM: return "AFDM";
        case WaveformFamily::FMCW: return "FMCW";
    }
    return "?";
}

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void check_ofdm_dims(const cvec& symbols, int subcarriers, int cp_length) {
    if (!is_power_of_two(subcarriers)) {
        throw std::invalid_argument("ofdm: subcarrier count must be a power of two");
    }
    if (cp_length < 0 || cp_length >= subcarriers) {
        throw std::invalid_argument("ofdm: cp length must be in [0, N)");
    }
    if (symbols.empty() || symbols.size() % static_cast<std::size_t>(subcarriers) != 0) {
        throw std::invalid_argument("ofdm: symbol count must be a nonzero multiple of N");
    }
}

cvec chirp_phase(int n, double c) {
    cvec out(n);
    for (int i = 0; i < n; ++i) {
        const double phase = -2.0 * kPi * c * static_cast<double>(i) * i;
        out[i] = std::polar(1.0, phase);
    }
    return out;
}

}  // namespace

WaveformFrame ofdm_modulate(const cvec& symbols, int subcarriers, int cp_length,
                            double sample_rate_hz) {
    check_ofdm_dims(symbols, subcarriers, cp_length);
    const std::size_t n = static_cast<std::size_t>(subcarriers);
    const std::size_t n_symbols = symbols.size() / n;
    WaveformFrame frame;
    frame.family = WaveformFamily::OFDM;
    frame.sample_rate_hz = sample_rate_hz;
    frame.grid = OfdmGrid{subcarriers, static_cast<int>(n_symbols), cp_length};
    frame.samples.reserve(n_symbols * (n + cp_length));
    for (std::size_t s = 0; s < n_symbols; ++s) {
        const cvec block(symbols.begin() + s * n, symbols.begin() + (s + 1) * n);
        const cvec time = fft_unitary(block, /*inverse=*/true);
        frame.samples.insert(frame.samples.end(), time.end() - cp_length, time.end());
        frame.samples.insert(frame.samples.end(), time.begin(), time.end());
    }
    return frame;
}

cvec ofdm_demodulate(const WaveformFrame& frame) {
    const auto* grid = std::get_if<OfdmGrid>(&frame.grid);
    if (grid == nullptr) {
        throw std::invalid_argument("ofdm_demodulate: frame is not OFDM");
    }
    const std::size_t n = static_cast<std::size_t>(grid->subcarriers);
    const std::size_t stride = n + static_cast<std::size_t>(grid->cp_length);
    if (frame.samples.size() != stride * static_cast<std::size_t>(grid->symbols)) {
        throw std::invalid_argument("ofdm_demodulate: sample count mismatch");
    }
    cvec symbols;
    symbols.reserve(n * grid->symbols);
    for (int s = 0; s < grid->symbols; ++s) {
        const auto start = frame.samples.begin() + s * stride + grid->cp_length;
        const cvec block(start, start + n);
        const cvec freq = fft_unitary(block, /*inverse=*/false);
        symbols.insert(symbols.end(), freq.begin(), freq.end());
    }
    return symbols;
}

WaveformFrame dfts_modulate(const cvec& symbols, int subcarriers, int cp_length,
                            double sample_rate_hz) {
    check_ofdm_dims(symbols, subcarriers, cp_length);
    const std::size_t n = static_cast<std::size_t>(subcarriers);
    cvec spread;
    spread.reserve(symbols.size());
    for (std::size_t s = 0; s < symbols.size() / n; ++s) {
        const cvec block(symbols.begin() + s * n, symbols.begin() + (s + 1) * n);
        const cvec freq = fft_unitary(block, /*inverse=*/false);
        spread.insert(spread.end(), freq.begin(), freq.end());
    }
    WaveformFrame frame = ofdm_modulate(spread, subcarriers, cp_length, sample_rate_hz);
    frame.family = WaveformFamily::DFTS_OFDM;
    return frame;
}

cvec dfts_demodulate(const WaveformFrame& frame) {
    if (frame.family != WaveformFamily::DFTS_OFDM) {
        throw std::invalid_argument("dfts_demodulate: frame is not DFT-s-OFDM");
    }
    WaveformFrame as_ofdm = frame;
    as_ofdm.family = WaveformFamily::OFDM;
    const cvec spread = ofdm_demodulate(as_ofdm);
    const auto& grid = std::get<OfdmGrid>(frame.grid);
    const std::size_t n = static_cast<std::size_t>(grid.subcarriers);
    cvec symbols;
    symbols.reserve(spread.size());
    for (std::size_t s = 0; s < spread.size() / n; ++s) {
        const cvec block(spread.begin() + s * n, spread.begin() + (s + 1) * n);
        const cvec despread = fft_unitary(block, /*inverse=*/true);
        symbols.insert(symbols.end(), despread.begin(), despread.end());
    }
    return symbols;
}

cvec isfft(const cvec& dd_grid, int delay_bins, int doppler_bins) {
    const int m = delay_bins;
    const int n = doppler_bins;
    if (m < 2 || n < 2 || dd_grid.size() != static_cast<std::size_t>(m) * n) {
        throw std::invalid_argument("isfft: grid dimension mismatch");
    }
    // IFFT along Doppler (rows), FFT along delay (columns).
    cvec tmp(dd_grid.size());
    for (int k = 0; k < m; ++k) {
        const cvec row(dd_grid.begin() + static_cast<std::size_t>(k) * n,
                       dd_grid.begin() + static_cast<std::size_t>(k + 1) * n);
        const cvec t = fft_unitary(row, /*inverse=*/true);
        std::copy(t.begin(), t.end(), tmp.begin() + static_cast<std::size_t>(k) * n);
    }
    cvec tf(dd_grid.size());  // tf[n_idx * m + m_idx]
    cvec col(m);
    for (int t = 0; t < n; ++t) {
        for (int k = 0; k < m; ++k) col[k] = tmp[static_cast<std::size_t>(k) * n + t];
        const cvec f = fft_unitary(col, /*inverse=*/false);
        for (int mm = 0; mm < m; ++mm) tf[static_cast<std::size_t>(t) * m + mm] = f[mm];
    }
    return tf;
}

cvec sfft(const cvec& tf_grid, int delay_bins, int doppler_bins) {
    const int m = delay_bins;
    const int n = doppler_bins;
    if (m < 2 || n < 2 || tf_grid.size() != static_cast<std::size_t>(m) * n) {
        throw std::invalid_argument("sfft: grid dimension mismatch");
    }
    cvec tmp(tf_grid.size());  // delay-major
    cvec col(m);
    for (int t = 0; t < n; ++t) {
        for (int mm = 0; mm < m; ++mm) col[mm] = tf_grid[static_cast<std::size_t>(t) * m + mm];
        const cvec f = fft_unitary(col, /*inverse=*/true);
        for (int k = 0; k < m; ++k) tmp[static_cast<std::size_t>(k) * n + t] = f[k];
    }
    cvec dd(tf_grid.size());
    for (int k = 0; k < m; ++k) {
        const cvec row(tmp.begin() + static_cast<std::size_t>(k) * n,
                       tmp.begin() + static_cast<std::size_t>(k + 1) * n);
        const cvec f = fft_unitary(row, /*inverse=*/false);
        std::copy(f.begin(), f.end(), dd.begin() + static_cast<std::size_t>(k) * n);
    }
    return dd;
}

WaveformFrame otfs_modulate(const cvec& dd_symbols, int delay_bins, int doppler_bins,
                            double sample_rate_hz) {
    const cvec tf = isfft(dd_symbols, delay_bins, doppler_bins);
    const int m = delay_bins;
    const int n = doppler_bins;
    WaveformFrame frame;
    frame.family = WaveformFamily::OTFS;
    frame.sample_rate_hz = sample_rate_hz;
    frame.grid = DelayDopplerGrid{m, n};
    frame.samples.reserve(tf.size());
    // Multicarrier modulation: per time symbol, IFFT across the M subcarriers.
    for (int t = 0; t < n; ++t) {
        const cvec sym(tf.begin() + static_cast<std::size_t>(t) * m,
                       tf.begin() + static_cast<std::size_t>(t + 1) * m);
        const cvec time = fft_unitary(sym, /*inverse=*/true);
        frame.samples.insert(frame.samples.end(), time.begin(), time.end());
    }
    return frame;
}

cvec otfs_demodulate(const WaveformFrame& frame) {
    const auto* grid = std::get_if<DelayDopplerGrid>(&frame.grid);
    if (grid == nullptr) {
        throw std::invalid_argument("otfs_demodulate: frame is not OTFS");
    }
    const int m = grid->delay_bins;
    const int n = grid->doppler_bins;
    if (frame.samples.size() != static_cast<std::size_t>(m) * n) {
        throw std::invalid_argument("otfs_demodulate: sample count mismatch");
    }
    cvec tf(frame.samples.size());
    for (int t = 0; t < n; ++t) {
        const cvec block(frame.samples.begin() + static_cast<std::size_t>(t) * m,
                         frame.samples.begin() + static_cast<std::size_t>(t + 1) * m);
        const cvec freq = fft_unitary(block, /*inverse=*/false);
        std::copy(freq.begin(), freq.end(), tf.begin() + static_cast<std::size_t>(t) * m);
    }
    return sfft(tf, m, n);
}

WaveformFrame afdm_modulate(const cvec& symbols, double c1, double c2,
                            double sample_rate_hz) {
    const int n = static_cast<int>(symbols.size());
    if (n < 2) {
        throw std::invalid_argument("afdm: need at least 2 symbols");
    }
    const cvec l1 = chirp_phase(n, c1);
    const cvec l2 = chirp_phase(n, c2);
    cvec stage(symbols.size());
    for (int i = 0; i < n; ++i) stage[i] = symbols[i] * std::conj(l2[i]);
    cvec time = fft_unitary(stage, /*inverse=*/true);
    for (int i = 0; i < n; ++i) time[i] *= std::conj(l1[i]);
    WaveformFrame frame;
    frame.family = WaveformFamily::AFDM;
    frame.sample_rate_hz = sample_rate_hz;
    frame.grid = AfdmGrid{n, c1, c2};
    frame.samples = std::move(time);
    return frame;
}

cvec afdm_demodulate(const WaveformFrame& frame) {
    const auto* grid = std::get_if<AfdmGrid>(&frame.grid);
    if (grid == nullptr) {
        throw std::invalid_argument("afdm_demodulate: frame is not AFDM");
    }
    const int n = grid->subcarriers;
    if (frame.samples.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("afdm_demodulate: sample count mismatch");
    }
    const cvec l1 = chirp_phase(n, grid->c1);
    const cvec l2 = chirp_phase(n, grid->c2);
    cvec stage(frame.samples.size());
    for (int i = 0; i < n; ++i) stage[i] = frame.samples[i] * l1[i];
    cvec freq = fft_unitary(stage, /*inverse=*/false);
    for (int i = 0; i < n; ++i) freq[i] *= l2[i];
    return freq;
}

double afdm_c1_for_doppler(int subcarriers, int max_doppler_bins) {
    if (subcarriers < 2 || max_doppler_bins < 0) {
        throw std::invalid_argument("afdm_c1_for_doppler: bad arguments");
    }
    return (2.0 * max_doppler_bins + 1.0) / (2.0 * subcarriers);
}

WaveformFrame fmcw_chirp(double sweep_bandwidth_hz, double duration_s,
                         double sample_rate_hz, bool up_chirp) {
    if (!(sweep_bandwidth_hz > 0.0) || !(duration_s > 0.0)) {
        throw std::invalid_argument("fmcw: bandwidth and duration must be > 0");
    }
    if (sample_rate_hz < sweep_bandwidth_hz) {
        throw std::invalid_argument(
            "fmcw: sample rate below sweep bandwidth (undersampled)");
    }
    const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
    if (n < 2) {
        throw std::invalid_argument("fmcw: fewer than 2 samples requested");
    }
    const double slope = sweep_bandwidth_hz / duration_s;
    const double sign = up_chirp ? 1.0 : -1.0;
    WaveformFrame frame;
    frame.family = WaveformFamily::FMCW;
    frame.sample_rate_hz = sample_rate_hz;
    frame.grid = FmcwGrid{sweep_bandwidth_hz, duration_s, up_chirp};
    frame.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / sample_rate_hz;
        frame.samples[i] = std::polar(1.0, sign * kPi * slope * t * t);
    }
    return frame;
}

double papr_db(const WaveformFrame& frame) {
    if (frame.samples.empty()) {
        throw std::domain_error("papr: empty frame");
    }
    double peak = 0.0;
    double sum = 0.0;
    for (const auto& s : frame.samples) {
        const double p = std::norm(s);
        peak = std::max(peak, p);
        sum += p;
    }
    if (peak == 0.0) {
        throw std::domain_error("papr: all-zero frame");
    }
    return 10.0 * std::log10(peak * frame.samples.size() / sum);
}

AmbiguitySurface cross_ambiguity(const cvec& received, const cvec& reference,
                                 double sample_rate_hz,
                                 const std::vector<double>& delays_s,
                                 const std::vector<double>& dopplers_hz) {
    if (delays_s.empty() || dopplers_hz.empty()) {
        throw std::invalid_argument("ambiguity: empty delay/doppler grid");
    }
    if (received.empty() || reference.empty() || !(sample_rate_hz > 0.0)) {
        throw std::invalid_argument("ambiguity: empty frames or bad sample rate");
    }
    const auto len = static_cast<long>(received.size());
    AmbiguitySurface out;
    out.delay_axis_s = delays_s;
    out.doppler_axis_hz = dopplers_hz;
    out.magnitude.resize(delays_s.size() * dopplers_hz.size());
    double peak = 0.0;
    for (std::size_t di = 0; di < delays_s.size(); ++di) {
        const long lag = std::lround(delays_s[di] * sample_rate_hz);
        if (std::abs(lag) >= len) {
            throw std::domain_error("ambiguity: delay outside frame support");
        }
        for (std::size_t vi = 0; vi < dopplers_hz.size(); ++vi) {
            const double nu = dopplers_hz[vi];
            std::complex<double> acc(0.0, 0.0);
            for (long t = 0; t < len; ++t) {
                const long ts = t - lag;
                if (ts < 0 || ts >= static_cast<long>(reference.size())) continue;
                const double phase = -2.0 * kPi * nu * static_cast<double>(t) / sample_rate_hz;
                acc += received[t] * std::conj(reference[ts]) * std::polar(1.0, phase);
            }
            const double mag = std::abs(acc);
            out.magnitude[di * dopplers_hz.size() + vi] = mag;
            if (mag > peak) {
                peak = mag;
                out.peak_delay_index = di;
                out.peak_doppler_index = vi;
            }
        }
    }
    if (peak > 0.0) {
        for (auto& v : out.magnitude) v /= peak;
    }
    return out;
}

AmbiguitySurface ambiguity(const WaveformFrame& frame,
                           const std::vector<double>& delays_s,
                           const std::vector<double>& dopplers_hz) {
    return cross_ambiguity(frame.samples, frame.samples, frame.sample_rate_hz, delays_s,
                           dopplers_hz);
}

double doppler_shift_hz(double carrier_hz, double velocity_m_s) {
    return carrier_hz * velocity_m_s / kSpeedOfLight;
}

double PaprSweepResult::percentile(double p) const {
    if (papr_db.empty() || !(p > 0.0) || p > 1.0) {
        throw std::invalid_argument("percentile: empty sample set or p outside (0, 1]");
    }
    std::vector<double> sorted = papr_db;
    std::sort(sorted.begin(), sorted.end());
    const auto idx = static_cast<std::size_t>(
        std::min(sorted.size() - 1.0, std::ceil(p * sorted.size()) - 1.0));
    return sorted[idx];
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

cvec random_qpsk(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> bits(0, 3);
    static const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    cvec out(n);
    for (auto& v : out) {
        const int b = bits(rng);
        v = {(b & 1) ? inv_sqrt2 : -inv_sqrt2, (b & 2) ? inv_sqrt2 : -inv_sqrt2};
    }
    return out;
}

// Frequency-domain zero-padding around DC: N occupied bins inside an os*N IFFT.
cvec oversampled_time(const cvec& bins, int oversample) {
    const std::size_t n = bins.size();
    const std::size_t big = n * static_cast<std::size_t>(oversample);
    cvec padded(big, {0.0, 0.0});
    const std::size_t half = n / 2;
    for (std::size_t i = 0; i < half; ++i) padded[i] = bins[i];
    for (std::size_t i = half; i < n; ++i) padded[big - n + i] = bins[i];
    return fft_unitary(padded, /*inverse=*/true);
}

}  // namespace

PaprSweepResult papr_sweep(WaveformFamily family, int subcarriers, int frames,
                           std::uint64_t seed, int oversample, int jobs) {
    if (family != WaveformFamily::OFDM && family != WaveformFamily::DFTS_OFDM) {
        throw std::invalid_argument("papr_sweep: family must be OFDM or DFTS_OFDM");
    }
    if (!is_power_of_two(subcarriers) || frames < 1 || oversample < 1 || jobs < 1) {
        throw std::invalid_argument("papr_sweep: bad sweep parameters");
    }
    PaprSweepResult out;
    out.papr_db.resize(frames);
    const auto one_frame = [&](int i) {
        const cvec symbols = random_qpsk(subcarriers, splitmix64(seed ^ (0x51ab0000ULL + i)));
        const cvec bins = family == WaveformFamily::DFTS_OFDM
                              ? fft_unitary(symbols, /*inverse=*/false)
                              : symbols;
        WaveformFrame frame;
        frame.family = family;
        frame.sample_rate_hz = 1.0;
        frame.grid = OfdmGrid{subcarriers, 1, 0};
        frame.samples = oversampled_time(bins, oversample);
        out.papr_db[i] = papr_db(frame);
    };
    if (jobs == 1) {
        for (int i = 0; i < frames; ++i) one_frame(i);
        return out;
    }
    // Warm the plan cache before going parallel.
    one_frame(0);
    std::vector<std::thread> workers;
    const int chunk = (frames + jobs - 1) / jobs;
    for (int w = 0; w < jobs; ++w) {
        const int lo = std::max(1, w * chunk);
        const int hi = std::min(frames, (w + 1) * chunk);
        if (lo >= hi) continue;
        workers.emplace_back([&, lo, hi] {
            for (int i = lo; i < hi; ++i) one_frame(i);
        });
    }
    for (auto& t : workers) t.join();
    return out;
}

}  // namespace saglink
