#pragma once

// Replicate farm. Results are stored by replicate index so the merged output
// does not depend on which thread ran which replicate.

#include <cstddef>
#include <exception>
#include <type_traits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gpfv {

/// Serial reference: f(0), f(1), ..., f(n - 1).
template <class F>
auto farm_serial(std::size_t n, F&& f) -> std::vector<std::invoke_result_t<F&, std::size_t>> {
    std::vector<std::invoke_result_t<F&, std::size_t>> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(f(i));
    return out;
}

/// OpenMP version of farm_serial. The first exception (by replicate index) is rethrown.
template <class F>
auto farm(std::size_t n, F&& f) -> std::vector<std::invoke_result_t<F&, std::size_t>> {
    using R = std::invoke_result_t<F&, std::size_t>;
    static_assert(std::is_default_constructible_v<R>, "farm results must be default constructible");
    std::vector<R> out(n);
    std::vector<std::exception_ptr> errors(n);
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < count; ++i) {
        const auto r = static_cast<std::size_t>(i);
        try {
            out[r] = f(r);
        } catch (...) {
            errors[r] = std::current_exception();
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

inline int farm_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace gpfv
