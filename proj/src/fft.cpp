#include "pnavg/fft.hpp"

#include "pnavg/error.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace pnavg::fft {

namespace {

class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_)
            fftw_destroy_plan(plan);
    }

    fftw_plan get(std::size_t n, int sign) {
        std::lock_guard lock(mutex_);
        const auto key = std::make_pair(n, sign);
        if (auto it = plans_.find(key); it != plans_.end())
            return it->second;
        auto* buffer = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
        if (buffer == nullptr)
            throw Error("fft: allocation failed");
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), buffer, buffer, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(buffer);
        if (plan == nullptr)
            throw Error("fft: planning failed");
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

void run(std::span<cplx> data, int sign) {
    if (data.empty())
        return;
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(cache().get(data.size(), sign), p, p);
}

} // namespace

void forward(std::span<cplx> data) { run(data, FFTW_FORWARD); }

void inverse(std::span<cplx> data) { run(data, FFTW_BACKWARD); }

double bin_frequency(std::size_t m, std::size_t n, double fs) noexcept {
    const auto nm = static_cast<double>(n);
    const auto mm = static_cast<double>(m);
    return (2 * m < n ? mm : mm - nm) * fs / nm;
}

} // namespace pnavg::fft
