#include "drselect/core/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace drselect {
namespace {

std::atomic<std::size_t> g_max_threads{1};
thread_local bool t_inside_parallel = false;

}  // namespace

void set_max_threads(std::size_t n) { g_max_threads.store(std::max<std::size_t>(1, n)); }

std::size_t max_threads() { return g_max_threads.load(); }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min(max_threads(), count);
    if (workers <= 1 || t_inside_parallel) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        t_inside_parallel = true;
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
        t_inside_parallel = false;
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace drselect
