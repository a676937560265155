#include "fkde/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fkde::parallel {

std::size_t resolve_threads(std::size_t requested) {
    if (requested > 0) {
        return requested;
    }
    if (const char* env = std::getenv("FKDE_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) {
            return static_cast<std::size_t>(v);
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

void for_each_worker(std::size_t n_workers, const std::function<void(std::size_t)>& body) {
    if (n_workers <= 1) {
        body(0);
        return;
    }
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> threads;
    threads.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) {
        threads.emplace_back([&, w] {
            try {
                body(w);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : threads) {
        t.join();
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
}

void parallel_for_static(std::size_t n_tasks, std::size_t max_workers,
                         const std::function<void(std::size_t)>& fn) {
    if (n_tasks == 0) {
        return;
    }
    const std::size_t n_workers = std::min(max_workers > 0 ? max_workers : 1, n_tasks);
    for_each_worker(n_workers, [&](std::size_t w) {
        for (std::size_t task = w; task < n_tasks; task += n_workers) {
            fn(task);
        }
    });
}

void parallel_for_dynamic(std::size_t n_tasks, std::size_t max_workers,
                          const std::function<void(std::size_t)>& fn) {
    if (n_tasks == 0) {
        return;
    }
    const std::size_t n_workers = std::min(max_workers > 0 ? max_workers : 1, n_tasks);
    std::atomic<std::size_t> next{0};
    for_each_worker(n_workers, [&](std::size_t) {
        for (;;) {
            const std::size_t task = next.fetch_add(1, std::memory_order_relaxed);
            if (task >= n_tasks) {
                break;
            }
            fn(task);
        }
    });
}

}  // namespace fkde::parallel
