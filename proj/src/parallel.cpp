#include "cradon/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <stdexcept>
#include <thread>
#include <vector>

namespace cradon {

namespace {
std::atomic<int> g_workers{1};
}

int worker_count() { return g_workers.load(); }

void set_worker_count(int n)
{
    if (n < 1)
        throw std::invalid_argument("worker count must be >= 1");
    g_workers.store(n);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body)
{
    if (n == 0)
        return;
    const auto workers = static_cast<std::size_t>(std::min<long>(worker_count(), static_cast<long>(n)));
    if (workers <= 1) {
        body(0, n);
        return;
    }
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    pool.reserve(workers);
    std::size_t slot = 0;
    for (std::size_t begin = 0; begin < n; begin += chunk, ++slot) {
        const std::size_t end = std::min(n, begin + chunk);
        pool.emplace_back([&body, &errors, slot, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                errors[slot] = std::current_exception();
            }
        });
    }
    for (auto& t : pool)
        t.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace cradon
