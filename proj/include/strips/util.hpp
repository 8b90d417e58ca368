#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace strips {

// Error classes map onto the CLI exit codes (1 config, 2 assumption, 3 solver).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct AssumptionError : std::runtime_error {
  std::string flag;      // which assumption failed
  long witness_node;     // offending node index, -1 if not node-local
  AssumptionError(std::string flag_, const std::string& what, long node = -1)
      : std::runtime_error(what), flag(std::move(flag_)), witness_node(node) {}
};

struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

// Global worker count used by parallel_for. 0 means hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

// Static partition over [0, n); chunk assignment is a pure function of n and
// the configured thread count, so results that are written per-index are
// identical for any schedule.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

std::uint64_t fnv1a64(const void* data, std::size_t len);
std::uint64_t fnv1a64(const std::string& s);

}  // namespace strips
