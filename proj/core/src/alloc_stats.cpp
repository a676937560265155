#include "fkde/alloc_stats.hpp"

#include <atomic>

namespace fkde::alloc_stats {

namespace {
std::atomic<std::size_t> g_current{0};
std::atomic<std::size_t> g_peak{0};
}  // namespace

std::size_t current_scalars() { return g_current.load(std::memory_order_relaxed); }
std::size_t peak_scalars() { return g_peak.load(std::memory_order_relaxed); }

void reset_peak() {
    g_peak.store(g_current.load(std::memory_order_relaxed), std::memory_order_relaxed);
}

void add(std::size_t n_scalars) {
    const std::size_t now = g_current.fetch_add(n_scalars, std::memory_order_relaxed) + n_scalars;
    std::size_t peak = g_peak.load(std::memory_order_relaxed);
    while (now > peak &&
           !g_peak.compare_exchange_weak(peak, now, std::memory_order_relaxed)) {
    }
}

void sub(std::size_t n_scalars) {
    g_current.fetch_sub(n_scalars, std::memory_order_relaxed);
}

}  // namespace fkde::alloc_stats
