#pragma once

#include <algorithm>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace surfdist {

/// Static-chunked parallel loop over [0, n). Results must be written to
/// per-index slots so the output is independent of scheduling. threads == 0
/// picks hardware concurrency; anything <= 1 runs inline.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                         int threads = 0) {
    if (threads == 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::size_t nworkers = std::min<std::size_t>(threads, n);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(nworkers);
    for (std::size_t w = 0; w < nworkers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += nworkers) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace surfdist
