#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "jssp/core.hpp"

namespace jssp {

using Seconds = std::chrono::duration<double>;

enum class DispatchRule { SPT, LPT, FIFO, MWR };

inline constexpr DispatchRule kAllRules[] = {DispatchRule::SPT, DispatchRule::LPT, DispatchRule::FIFO,
                                             DispatchRule::MWR};

std::string_view to_string(DispatchRule rule);

struct SolveResult {
  Schedule schedule;
  bool proven_optimal = false;
  Seconds elapsed{0};
  /// Branch-and-bound nodes (exact) or annealing iterations (anytime).
  std::uint64_t nodes_explored = 0;
  Time lower_bound = 0;
  /// Incumbent makespan after each improvement, starting with the seed.
  std::vector<Time> incumbent_trace;
};

/// Largest instance (total operations) the brute-force oracle accepts.
inline constexpr int kOracleMaxOperations = 12;

/// Exhaustive minimum makespan over every dispatch order, each operation
/// appended to its machine at the earliest feasible time. Test oracle only.
Time brute_force_oracle(const JsspInstance& instance);

struct ExactOptions {
  std::uint64_t node_limit = 200'000'000;
  Seconds time_limit{600};
  /// Known feasible schedule (e.g. from the annealer); the search only looks
  /// for strictly better ones.
  std::optional<Schedule> incumbent;
};

/// Depth-first branch and bound over active schedules (conflict-set
/// branching on the machine of the earliest completing operation), pruned by
/// job-tail and one-machine head/body/tail bounds.
SolveResult solve_exact(const JsspInstance& instance, const ExactOptions& options = {});

/// Non-delay schedule: repeatedly starts, at the earliest possible time, the
/// ready operation preferred by `rule`; ties go to the lowest job id.
Schedule dispatch_heuristic(const JsspInstance& instance, DispatchRule rule);

/// Lowest-makespan dispatch schedule over all rules (first rule wins ties).
Schedule best_dispatch(const JsspInstance& instance);

struct AnytimeOptions {
  Seconds time_limit{300};
  std::uint64_t seed = 0;
  std::uint64_t max_iterations = 5'000'000;
  /// Stop after this many iterations without improving the incumbent.
  std::uint64_t stall_iterations = 200'000;
};

/// Simulated annealing over adjacent swaps inside critical blocks, seeded
/// with best_dispatch. Deterministic unless the time limit is what stops it.
SolveResult solve_anytime(const JsspInstance& instance, const AnytimeOptions& options = {});

/// Solves many instances with the anytime solver; item i uses seed derive_seed(seed, i).
std::vector<SolveResult> solve_batch(const std::vector<JsspInstance>& instances, const AnytimeOptions& options,
                                     int workers = 0);
std::vector<SolveResult> solve_batch_serial(const std::vector<JsspInstance>& instances,
                                            const AnytimeOptions& options);

}  // namespace jssp
