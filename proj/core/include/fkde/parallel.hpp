#pragma once

#include <cstddef>
#include <functional>

namespace fkde::parallel {

// Worker count resolution: explicit request > FKDE_THREADS env var >
// hardware concurrency. Always at least 1.
std::size_t resolve_threads(std::size_t requested);

// Runs body(worker_id) once on each of n_workers threads (inline when 1).
// The first exception thrown by any worker is rethrown after the join.
void for_each_worker(std::size_t n_workers, const std::function<void(std::size_t)>& body);

// Runs fn(task) for task in [0, n_tasks) on up to max_workers threads.
// Static cyclic partition: worker w runs tasks w, w + W, w + 2W, ... in
// ascending order, so the work each output element sees is independent of
// the number of workers.
void parallel_for_static(std::size_t n_tasks, std::size_t max_workers,
                         const std::function<void(std::size_t)>& fn);

// Dynamic variant: tasks are claimed from a shared counter in arrival order.
// Used by the engine's fast accumulation mode.
void parallel_for_dynamic(std::size_t n_tasks, std::size_t max_workers,
                          const std::function<void(std::size_t)>& fn);

}  // namespace fkde::parallel
