#pragma once

#include <algorithm>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "jssp/core.hpp"
#include "jssp/json_io.hpp"

namespace jssp::test {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(JSSP_FIXTURE_DIR) / name;
}

inline std::string read_fixture(const std::string& name) { return read_file(fixture(name)); }

/// The 3x3 example used throughout the text-format fixtures.
inline JsspInstance example3x3() {
  return JsspInstance(3, 3,
                      {{{0, 105}, {1, 29}, {2, 213}}, {{2, 193}, {1, 18}, {0, 213}}, {{0, 78}, {2, 74}, {1, 221}}});
}

/// Its labelled schedule: starts[j][k].
inline std::vector<std::vector<Time>> example3x3_starts() { return {{78, 183, 267}, {0, 212, 230}, {0, 193, 267}}; }

inline JsspInstance ft06() {
  const int rows[6][12] = {{2, 1, 0, 3, 1, 6, 3, 7, 5, 3, 4, 6},  {1, 8, 2, 5, 4, 10, 5, 10, 0, 10, 3, 4},
                           {2, 5, 3, 4, 5, 8, 0, 9, 1, 1, 4, 7},  {1, 5, 0, 5, 2, 5, 3, 3, 4, 8, 5, 9},
                           {2, 9, 1, 3, 4, 5, 5, 4, 0, 3, 3, 1},  {1, 3, 3, 3, 5, 9, 0, 10, 4, 4, 2, 1}};
  std::vector<std::vector<Operation>> jobs(6);
  for (int j = 0; j < 6; ++j) {
    for (int t = 0; t < 12; t += 2) jobs[static_cast<std::size_t>(j)].push_back({rows[j][t], rows[j][t + 1]});
  }
  return JsspInstance(6, 6, std::move(jobs));
}

inline JsspInstance two_by_two() { return JsspInstance(2, 2, {{{0, 3}, {1, 2}}, {{1, 2}, {0, 4}}}); }

/// Independent optimum: every combination of per-machine processing orders,
/// each evaluated as a longest path over the disjunctive graph (cyclic
/// combinations discarded). Exponential; tiny instances only.
inline Time machine_order_oracle(const JsspInstance& inst) {
  struct Node {
    int job, op;
  };
  std::vector<std::vector<Node>> on_machine(static_cast<std::size_t>(inst.num_machines()));
  for (int j = 0; j < inst.num_jobs(); ++j) {
    for (int k = 0; k < static_cast<int>(inst.job(j).size()); ++k) {
      on_machine[static_cast<std::size_t>(inst.op(j, k).machine)].push_back({j, k});
    }
  }
  std::vector<std::vector<int>> perm(on_machine.size());
  for (std::size_t m = 0; m < perm.size(); ++m) {
    for (int i = 0; i < static_cast<int>(on_machine[m].size()); ++i) perm[m].push_back(i);
  }

  auto evaluate = [&]() -> std::optional<Time> {
    // Relax start times; a valid order converges in at most (#ops) rounds.
    std::vector<std::vector<Time>> start(static_cast<std::size_t>(inst.num_jobs()));
    for (int j = 0; j < inst.num_jobs(); ++j) start[static_cast<std::size_t>(j)].assign(inst.job(j).size(), 0);
    const int total = inst.total_operations();
    for (int round = 0; round <= total + 1; ++round) {
      bool changed = false;
      auto end_of = [&](Node n) { return start[static_cast<std::size_t>(n.job)][static_cast<std::size_t>(n.op)] + inst.op(n.job, n.op).duration; };
      auto raise = [&](Node n, Time t) {
        auto& s = start[static_cast<std::size_t>(n.job)][static_cast<std::size_t>(n.op)];
        if (t > s) {
          s = t;
          changed = true;
        }
      };
      for (int j = 0; j < inst.num_jobs(); ++j) {
        for (int k = 1; k < static_cast<int>(inst.job(j).size()); ++k) raise({j, k}, end_of({j, k - 1}));
      }
      for (std::size_t m = 0; m < perm.size(); ++m) {
        for (std::size_t p = 1; p < perm[m].size(); ++p) {
          raise(on_machine[m][static_cast<std::size_t>(perm[m][p])],
                end_of(on_machine[m][static_cast<std::size_t>(perm[m][p - 1])]));
        }
      }
      if (!changed) {
        Time ms = 0;
        for (int j = 0; j < inst.num_jobs(); ++j) {
          for (int k = 0; k < static_cast<int>(inst.job(j).size()); ++k) ms = std::max(ms, end_of({j, k}));
        }
        return ms;
      }
    }
    return std::nullopt;  // positive cycle: start times grow without bound
  };

  std::optional<Time> best;
  // Odometer over the per-machine permutations.
  while (true) {
    if (auto v = evaluate(); v && (!best || *v < *best)) best = v;
    std::size_t m = 0;
    for (; m < perm.size(); ++m) {
      if (std::next_permutation(perm[m].begin(), perm[m].end())) break;
    }
    if (m == perm.size()) break;
  }
  return *best;
}

}  // namespace jssp::test
