#pragma once

#include <fftw3.h>

#include <mutex>

namespace depthkit::detail {

// FFTW planning is not thread-safe; execution is
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

} // namespace depthkit::detail
