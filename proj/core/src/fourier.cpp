#include "flowlines/fourier.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>

#include "flowlines/errors.hpp"

namespace flowlines::fourier {
namespace {

struct PlanDeleter {
    void operator()(fftw_plan_s* p) const noexcept { fftw_destroy_plan(p); }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// The FFTW planner is not reentrant; execution of an existing plan on fresh
// arrays is. Plans are created unaligned so any std::vector buffer works.
fftw_plan plan_for(int n, int sign) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, Plan> cache;

    std::lock_guard lock(mutex);
    auto& slot = cache[{n, sign}];
    if (!slot) {
        std::vector<Complex> in(static_cast<std::size_t>(n)), out(in.size());
        slot.reset(fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                                    reinterpret_cast<fftw_complex*>(out.data()), sign,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED));
    }
    return slot.get();
}

void require_resolution(std::size_t n, int K) {
    if (K < 0 || n < static_cast<std::size_t>(2 * K + 1)) {
        throw ResolutionError("grid of " + std::to_string(n) + " points cannot represent " +
                              std::to_string(2 * K + 1) + " modes");
    }
}

}  // namespace

std::vector<Complex> analyze(std::span<const Complex> samples, int K) {
    require_resolution(samples.size(), K);
    const int n = static_cast<int>(samples.size());

    std::vector<Complex> in(samples.begin(), samples.end());
    std::vector<Complex> out(in.size());
    fftw_execute_dft(plan_for(n, FFTW_FORWARD), reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));

    std::vector<Complex> coeffs(static_cast<std::size_t>(2 * K + 1));
    const double scale = 1.0 / n;
    for (int k = -K; k <= K; ++k) {
        const int idx = k >= 0 ? k : n + k;
        coeffs[static_cast<std::size_t>(k + K)] = out[static_cast<std::size_t>(idx)] * scale;
    }
    return coeffs;
}

std::vector<Complex> synthesize(std::span<const Complex> coeffs, int n) {
    const int K = (static_cast<int>(coeffs.size()) - 1) / 2;
    require_resolution(static_cast<std::size_t>(n), K);

    std::vector<Complex> in(static_cast<std::size_t>(n));
    for (int k = -K; k <= K; ++k) {
        const int idx = k >= 0 ? k : n + k;
        in[static_cast<std::size_t>(idx)] = coeffs[static_cast<std::size_t>(k + K)];
    }
    std::vector<Complex> out(in.size());
    fftw_execute_dft(plan_for(n, FFTW_BACKWARD), reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

std::vector<double> grid(int n_x) {
    std::vector<double> x(static_cast<std::size_t>(n_x));
    for (int i = 0; i < n_x; ++i) x[static_cast<std::size_t>(i)] = 2.0 * std::numbers::pi * i / n_x;
    return x;
}

}  // namespace flowlines::fourier
