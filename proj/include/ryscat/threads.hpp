#pragma once

#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ryscat {

// Static-stride parallel loop over [0, n).  Work item i only writes state
// owned by index i, so the result is identical for any worker count; the
// first exception thrown by any worker is rethrown after the join.
template <class F>
void parallel_for(long n, int workers, F&& body) {
    if (n <= 0) return;
    if (workers < 1) workers = 1;
    if (workers == 1 || n == 1) {
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
    const int nt = static_cast<int>(std::min<long>(workers, n));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nt));
    std::exception_ptr first_error;
    std::mutex err_mutex;
    for (int t = 0; t < nt; ++t) {
        pool.emplace_back([&, t]() {
            try {
                for (long i = t; i < n; i += nt) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace ryscat
