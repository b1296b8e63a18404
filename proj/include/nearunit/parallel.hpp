#pragma once

#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nearunit {

/// Number of workers to use for a hint; 0 means "runtime default".
[[nodiscard]] inline int resolve_threads(int hint) noexcept {
#ifdef _OPENMP
    return hint > 0 ? hint : omp_get_max_threads();
#else
    (void)hint;
    return 1;
#endif
}

/// Runs body(i) for i in [0, count) across `threads` workers.
///
/// Work units must write only to their own slot; results are then identical
/// for any worker count. If several units throw, the exception of the lowest
/// index is rethrown.
template <typename Body>
void parallel_for(std::size_t count, int threads, Body&& body) {
    std::exception_ptr error;
    std::size_t error_index = std::numeric_limits<std::size_t>::max();
    std::mutex error_mutex;
    const auto n = static_cast<long long>(count);

#pragma omp parallel for schedule(dynamic, 1) num_threads(resolve_threads(threads))
    for (long long i = 0; i < n; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (static_cast<std::size_t>(i) < error_index) {
                error_index = static_cast<std::size_t>(i);
                error = std::current_exception();
            }
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

}  // namespace nearunit
