#include "etmas/batch.hpp"

#include <exception>

#include <omp.h>

#include "etmas/analysis.hpp"

namespace etmas {

std::vector<Scenario> seed_sweep(const Scenario& base, std::uint64_t first_seed, std::size_t count) {
  std::vector<Scenario> out(count, base);
  for (std::size_t k = 0; k < count; ++k) out[k].seed = first_seed + k;
  return out;
}

std::vector<Trace> run_batch_serial(const std::vector<Scenario>& scenarios) {
  std::vector<Trace> out;
  out.reserve(scenarios.size());
  for (const auto& s : scenarios) out.push_back(simulate(s));
  return out;
}

std::vector<Trace> run_batch_parallel(const std::vector<Scenario>& scenarios, int threads) {
  const auto count = static_cast<std::ptrdiff_t>(scenarios.size());
  std::vector<Trace> out(scenarios.size());
  std::vector<std::exception_ptr> errors(scenarios.size());
  const int nt = threads > 0 ? threads : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const auto i = static_cast<std::size_t>(k);
    try {
      out[i] = simulate(scenarios[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }

  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::vector<double> disagreement_series_serial(const Trace& tr) {
  std::vector<double> out(tr.rows());
  for (std::size_t k = 0; k < tr.rows(); ++k) out[k] = disagreement_at(tr, k);
  return out;
}

std::vector<double> disagreement_series_parallel(const Trace& tr, int threads) {
  const auto rows = static_cast<std::ptrdiff_t>(tr.rows());
  std::vector<double> out(tr.rows());
  const int nt = threads > 0 ? threads : omp_get_max_threads();

#pragma omp parallel for schedule(static) num_threads(nt)
  for (std::ptrdiff_t k = 0; k < rows; ++k) out[static_cast<std::size_t>(k)] = disagreement_at(tr, static_cast<std::size_t>(k));
  return out;
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace etmas
