#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace tok {

/// Runs f(0..count-1) on up to `jobs` threads in contiguous blocks. The
/// first exception thrown by any block is rethrown.
template <class F>
void parallel_for(std::size_t count, unsigned jobs, F&& f)
{
    jobs = std::max(1u, jobs);
    if (jobs == 1 || count < 2) {
        for (std::size_t k = 0; k < count; ++k) f(k);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(jobs, count);
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            try {
                for (std::size_t k = w * count / workers; k < (w + 1) * count / workers; ++k) f(k);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace tok
