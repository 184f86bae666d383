#pragma once

// Data-parallel kernels over independent work items. Each kernel has a serial
// reference; the OpenMP variant must return bit-identical results because
// every item is computed by exactly one thread with no shared accumulation.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "etmas/engine.hpp"

namespace etmas {

// Copies of `base` with seeds first_seed, first_seed + 1, ...
std::vector<Scenario> seed_sweep(const Scenario& base, std::uint64_t first_seed, std::size_t count);

std::vector<Trace> run_batch_serial(const std::vector<Scenario>& scenarios);
// threads <= 0 uses the OpenMP default. The first failing scenario's
// exception (lowest index) is rethrown after the loop.
std::vector<Trace> run_batch_parallel(const std::vector<Scenario>& scenarios, int threads = 0);

// Max pairwise disagreement for every row of a trace.
std::vector<double> disagreement_series_serial(const Trace& tr);
std::vector<double> disagreement_series_parallel(const Trace& tr, int threads = 0);

int max_threads();

}  // namespace etmas
