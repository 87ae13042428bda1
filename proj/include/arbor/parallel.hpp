#pragma once

#include <cstddef>
#include <functional>

namespace arbor {

/// ARBOR_WORKERS if set to a positive integer, else the hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, count) on up to `workers` threads. If any call
/// throws, the exception of the smallest failing index is rethrown.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& body);

}  // namespace arbor
