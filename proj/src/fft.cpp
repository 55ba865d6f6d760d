#include "saglink/fft.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

namespace saglink {

namespace {

std::mutex plan_mutex;
std::map<std::pair<std::size_t, bool>, fftw_plan> plan_cache;

fftw_plan plan_for(std::size_t n, bool inverse) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    const auto key = std::make_pair(n, inverse);
    auto it = plan_cache.find(key);
    if (it != plan_cache.end()) return it->second;
    cvec scratch(n);
    // FFTW_UNALIGNED lets the cached plan run on any caller buffer.
    fftw_plan plan = fftw_plan_dft_1d(
        static_cast<int>(n), reinterpret_cast<fftw_complex*>(scratch.data()),
        reinterpret_cast<fftw_complex*>(scratch.data()),
        inverse ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plan_cache.emplace(key, plan);
    return plan;
}

}  // namespace

cvec fft_unitary(const cvec& in, bool inverse) {
    if (in.empty()) {
        throw std::invalid_argument("fft: empty input");
    }
    cvec out(in.size());
    if (in.size() == 1) {
        out[0] = in[0];
        return out;
    }
    fftw_plan plan = plan_for(in.size(), inverse);
    // fftw_execute_dft is safe to call concurrently on distinct buffers.
    fftw_execute_dft(plan,
                     reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(
                         in.data())),
                     reinterpret_cast<fftw_complex*>(out.data()));
    const double scale = 1.0 / std::sqrt(static_cast<double>(in.size()));
    for (auto& v : out) v *= scale;
    return out;
}

}  // namespace saglink
