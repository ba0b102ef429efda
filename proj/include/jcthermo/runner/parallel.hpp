// parallel.hpp: order-preserving task pool for sweep points

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace jcthermo::runner {

// JC_THERMO_THREADS caps the pool; default is the number of cores.
inline unsigned thread_budget() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("JC_THERMO_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) n = static_cast<unsigned>(v);
        } catch (const std::exception&) {
            // unparsable values fall back to the default
        }
    }
    return n;
}

// results[i] = fn(i). The first exception thrown by any task is rethrown.
template <class R, class Fn>
std::vector<R> parallel_map(std::size_t count, Fn&& fn, unsigned threads = thread_budget()) {
    std::vector<R> results(count);
    if (count == 0) return results;
    threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), count));

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) {
            try {
                results[i] = fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next = count;
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);
    return results;
}

}  // namespace jcthermo::runner
