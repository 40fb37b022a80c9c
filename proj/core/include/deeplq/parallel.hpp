#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace deeplq {

/// Worker count: DEEPLQ_WORKERS when set (>= 1), else hardware concurrency.
int worker_count();

/// Runs fn(0..count-1) on up to worker_count() threads. Each index runs
/// exactly once; the first exception is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

std::uint64_t splitmix64(std::uint64_t x);

/// Seed of replicate m, independent of scheduling.
std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t m);

}  // namespace deeplq
