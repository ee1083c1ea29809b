// Thin FFTW3 wrapper for the gridded NUFFT path.
//
// Conventions: fft_forward computes the unnormalised DFT with kernel
// exp(-2*pi*i*n.x/N); fft_backward is its exact adjoint (unnormalised inverse).
// Plans are created with FFTW_ESTIMATE so results are reproducible run to run;
// plan creation is serialised behind a mutex (FFTW planning is not
// thread-safe, execution on distinct arrays is).

#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include <fftw3.h>

#include "namri/core.hpp"

namespace namri {
namespace detail {

class FftPlanCache {
public:
    static FftPlanCache& instance()
    {
        static FftPlanCache cache;
        return cache;
    }

    void execute(const GridDims& dims, int sign, std::vector<cdouble>& inout)
    {
        fftw_plan plan = nullptr;
        {
            std::lock_guard<std::mutex> lock(mutex_);
            const Key key{dims.nx, dims.ny, dims.nz, sign};
            auto it = plans_.find(key);
            if (it == plans_.end()) {
                // Planning must not touch the caller's buffer (ESTIMATE still
                // reads alignment), so plan on a scratch array once per shape.
                std::vector<cdouble> scratch(dims.total());
                fftw_plan p = fftw_plan_dft_3d(
                    dims.nz, dims.ny, dims.nx, reinterpret_cast<fftw_complex*>(scratch.data()),
                    reinterpret_cast<fftw_complex*>(scratch.data()), sign,
                    FFTW_ESTIMATE | FFTW_UNALIGNED);
                it = plans_.emplace(key, p).first;
            }
            plan = it->second;
        }
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(inout.data()),
                         reinterpret_cast<fftw_complex*>(inout.data()));
    }

private:
    using Key = std::tuple<int, int, int, int>;

    FftPlanCache() = default;
    ~FftPlanCache()
    {
        for (auto& [k, p] : plans_) fftw_destroy_plan(p);
    }

    std::mutex mutex_;
    std::map<Key, fftw_plan> plans_;
};

} // namespace detail

// In-place unnormalised DFT, exp(-2*pi*i) kernel. data is x-fastest.
inline void fft_forward(const GridDims& dims, std::vector<cdouble>& data)
{
    detail::FftPlanCache::instance().execute(dims, FFTW_FORWARD, data);
}

// In-place unnormalised inverse DFT (adjoint of fft_forward).
inline void fft_backward(const GridDims& dims, std::vector<cdouble>& data)
{
    detail::FftPlanCache::instance().execute(dims, FFTW_BACKWARD, data);
}

} // namespace namri
