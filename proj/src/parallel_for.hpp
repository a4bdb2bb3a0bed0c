#ifndef FAST_SRC_PARALLEL_FOR_HPP
#define FAST_SRC_PARALLEL_FOR_HPP

#include <cstddef>
#include <exception>
#include <vector>

namespace fast::detail {

// body(i) for i in [0, n) across OpenMP threads. Exceptions cannot cross the
// parallel region, so they are captured per index and the lowest one rethrown.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    std::vector<std::exception_ptr> errors(n);
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        try {
            body(idx);
        } catch (...) {
            errors[idx] = std::current_exception();
        }
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

}  // namespace fast::detail

#endif  // FAST_SRC_PARALLEL_FOR_HPP
