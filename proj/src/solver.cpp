#include "jssp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "jssp/instgen.hpp"
#include "jssp/parallel.hpp"

namespace jssp {

namespace {

using Clock = std::chrono::steady_clock;
constexpr Time kInfinity = std::numeric_limits<Time>::max();

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

int job_length(const JsspInstance& inst, int j) { return static_cast<int>(inst.job(j).size()); }

// ---------------------------------------------------------------------------
// Brute-force oracle

class OracleSearch {
 public:
  explicit OracleSearch(const JsspInstance& inst)
      : inst_(inst),
        next_(idx(inst.num_jobs()), 0),
        job_ready_(idx(inst.num_jobs()), 0),
        mach_ready_(idx(inst.num_machines()), 0),
        mach_left_(idx(inst.num_machines()), 0) {
    for (const auto& job : inst.jobs()) {
      for (const auto& o : job) ++mach_left_[idx(o.machine)];
    }
  }

  Time run() { return visit(); }

 private:
  // Every semi-active schedule is reproduced by dispatching its operations in
  // order of start time, so only orders with non-decreasing starts are
  // enumerated. visit() returns the smallest achievable latest end among the
  // operations still to dispatch; it depends only on the unfinished jobs and
  // the machines they still need, and equal states are expanded once.
  Time visit() {
    std::vector<Time> key;
    key.reserve(next_.size() * 2 + mach_ready_.size() + 1);
    key.push_back(last_start_);
    for (std::size_t j = 0; j < next_.size(); ++j) {
      const bool done = next_[j] >= job_length(inst_, static_cast<int>(j));
      key.push_back(next_[j]);
      key.push_back(done ? -1 : job_ready_[j]);
    }
    for (std::size_t m = 0; m < mach_ready_.size(); ++m) key.push_back(mach_left_[m] ? mach_ready_[m] : -1);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    Time best = kInfinity;
    bool any = false;
    for (int j = 0; j < inst_.num_jobs(); ++j) {
      if (next_[idx(j)] >= job_length(inst_, j)) continue;
      any = true;
      const auto& o = inst_.op(j, next_[idx(j)]);
      const Time saved_job = job_ready_[idx(j)];
      const Time saved_mach = mach_ready_[idx(o.machine)];
      const Time start = std::max(saved_job, saved_mach);
      if (start < last_start_) continue;
      const Time saved_last = last_start_;
      const Time end = start + o.duration;
      last_start_ = start;
      job_ready_[idx(j)] = end;
      mach_ready_[idx(o.machine)] = end;
      ++next_[idx(j)];
      --mach_left_[idx(o.machine)];
      best = std::min(best, std::max(end, visit()));
      ++mach_left_[idx(o.machine)];
      --next_[idx(j)];
      job_ready_[idx(j)] = saved_job;
      mach_ready_[idx(o.machine)] = saved_mach;
      last_start_ = saved_last;
    }
    if (!any) best = 0;
    memo_.emplace(std::move(key), best);
    return best;
  }

  const JsspInstance& inst_;
  std::vector<int> next_;
  std::vector<Time> job_ready_;
  std::vector<Time> mach_ready_;
  std::vector<int> mach_left_;
  Time last_start_ = 0;
  std::map<std::vector<Time>, Time> memo_;
};

// ---------------------------------------------------------------------------
// Branch and bound

class BranchAndBound {
 public:
  BranchAndBound(const JsspInstance& inst, const ExactOptions& options, const Schedule& incumbent)
      : inst_(inst),
        options_(options),
        next_(idx(inst.num_jobs()), 0),
        job_ready_(idx(inst.num_jobs()), 0),
        mach_ready_(idx(inst.num_machines()), 0),
        starts_(incumbent.starts(inst)),
        best_starts_(starts_),
        best_(incumbent.makespan()),
        total_(inst.total_operations()),
        head_min_(idx(inst.num_machines())),
        tail_min_(idx(inst.num_machines())),
        work_(idx(inst.num_machines())) {
    suffix_.resize(idx(inst.num_jobs()));
    for (int j = 0; j < inst.num_jobs(); ++j) {
      auto& s = suffix_[idx(j)];
      s.assign(idx(job_length(inst, j) + 1), 0);
      for (int k = job_length(inst, j) - 1; k >= 0; --k) s[idx(k)] = s[idx(k + 1)] + inst.op(j, k).duration;
    }
  }

  void run() {
    deadline_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(options_.time_limit);
    root_bound_ = bound();
    dfs();
  }

  bool completed() const { return !aborted_; }
  Time best() const { return best_; }
  Time root_bound() const { return root_bound_; }
  std::uint64_t nodes() const { return nodes_; }
  const std::vector<std::vector<Time>>& best_starts() const { return best_starts_; }

 private:
  // Job tails, plus for each machine: earliest head of its remaining
  // operations + their total work + the smallest tail after any of them.
  Time bound() {
    Time lb = *std::max_element(mach_ready_.begin(), mach_ready_.end());
    std::fill(head_min_.begin(), head_min_.end(), kInfinity);
    std::fill(tail_min_.begin(), tail_min_.end(), kInfinity);
    std::fill(work_.begin(), work_.end(), 0);
    for (int j = 0; j < inst_.num_jobs(); ++j) {
      const int n = job_length(inst_, j);
      int k = next_[idx(j)];
      if (k >= n) continue;
      lb = std::max(lb, job_ready_[idx(j)] + suffix_[idx(j)][idx(k)]);
      Time head = job_ready_[idx(j)];
      for (; k < n; ++k) {
        const auto& o = inst_.op(j, k);
        const auto m = idx(o.machine);
        head_min_[m] = std::min(head_min_[m], head);
        tail_min_[m] = std::min(tail_min_[m], suffix_[idx(j)][idx(k + 1)]);
        work_[m] += o.duration;
        head += o.duration;
      }
    }
    for (std::size_t m = 0; m < work_.size(); ++m) {
      if (work_[m] == 0) continue;
      lb = std::max(lb, std::max(mach_ready_[m], head_min_[m]) + work_[m] + tail_min_[m]);
    }
    return lb;
  }

  bool out_of_budget() {
    if (nodes_ >= options_.node_limit) return true;
    if ((nodes_ & 1023U) == 0 && Clock::now() > deadline_) return true;
    return false;
  }

  struct Candidate {
    Time start;
    int job;
  };

  void dfs() {
    if (aborted_) return;
    ++nodes_;
    if (out_of_budget()) {
      aborted_ = true;
      return;
    }
    if (scheduled_ == total_) {
      const Time ms = *std::max_element(mach_ready_.begin(), mach_ready_.end());
      if (ms < best_) {
        best_ = ms;
        best_starts_ = starts_;
      }
      return;
    }
    if (bound() >= best_) return;

    // Earliest completion among ready operations decides the machine to branch on.
    Time min_completion = kInfinity;
    int branch_machine = -1;
    for (int j = 0; j < inst_.num_jobs(); ++j) {
      const int k = next_[idx(j)];
      if (k >= job_length(inst_, j)) continue;
      const auto& o = inst_.op(j, k);
      const Time c = std::max(job_ready_[idx(j)], mach_ready_[idx(o.machine)]) + o.duration;
      if (c < min_completion) {
        min_completion = c;
        branch_machine = o.machine;
      }
    }
    std::vector<Candidate> conflict;
    for (int j = 0; j < inst_.num_jobs(); ++j) {
      const int k = next_[idx(j)];
      if (k >= job_length(inst_, j)) continue;
      const auto& o = inst_.op(j, k);
      if (o.machine != branch_machine) continue;
      const Time s = std::max(job_ready_[idx(j)], mach_ready_[idx(o.machine)]);
      if (s < min_completion) conflict.push_back({s, j});
    }
    std::sort(conflict.begin(), conflict.end(), [](const Candidate& a, const Candidate& b) {
      return a.start != b.start ? a.start < b.start : a.job < b.job;
    });

    for (const auto& c : conflict) {
      const int j = c.job;
      const int k = next_[idx(j)];
      const auto& o = inst_.op(j, k);
      const Time saved_job = job_ready_[idx(j)];
      const Time saved_mach = mach_ready_[idx(o.machine)];
      const Time end = c.start + o.duration;
      starts_[idx(j)][idx(k)] = c.start;
      job_ready_[idx(j)] = end;
      mach_ready_[idx(o.machine)] = end;
      ++next_[idx(j)];
      ++scheduled_;
      dfs();
      --scheduled_;
      --next_[idx(j)];
      job_ready_[idx(j)] = saved_job;
      mach_ready_[idx(o.machine)] = saved_mach;
      if (aborted_) return;
    }
  }

  const JsspInstance& inst_;
  const ExactOptions& options_;
  std::vector<int> next_;
  std::vector<Time> job_ready_;
  std::vector<Time> mach_ready_;
  std::vector<std::vector<Time>> starts_;
  std::vector<std::vector<Time>> best_starts_;
  std::vector<std::vector<Time>> suffix_;
  Time best_;
  Time root_bound_ = 0;
  int total_;
  int scheduled_ = 0;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
  Clock::time_point deadline_;
  std::vector<Time> head_min_;
  std::vector<Time> tail_min_;
  std::vector<Time> work_;
};

// ---------------------------------------------------------------------------
// Disjunctive-graph evaluation for the annealer

class SequenceEvaluator {
 public:
  explicit SequenceEvaluator(const JsspInstance& inst) : inst_(inst) {
    int id = 0;
    for (int j = 0; j < inst.num_jobs(); ++j) {
      first_.push_back(id);
      for (int k = 0; k < job_length(inst, j); ++k) {
        job_of_.push_back(j);
        op_of_.push_back(k);
        machine_of_.push_back(inst.op(j, k).machine);
        duration_of_.push_back(inst.op(j, k).duration);
        ++id;
      }
    }
    n_ = id;
    start_.resize(idx(n_));
    crit_pred_.resize(idx(n_));
    mach_pred_.resize(idx(n_));
    mach_next_.resize(idx(n_));
    indegree_.resize(idx(n_));
  }

  int op_id(int j, int k) const { return first_[idx(j)] + k; }
  int size() const { return n_; }
  int machine_of(int id) const { return machine_of_[idx(id)]; }

  // Longest-path start times; false when the machine orders form a cycle.
  bool evaluate(const std::vector<std::vector<int>>& seq) {
    std::fill(mach_pred_.begin(), mach_pred_.end(), -1);
    std::fill(mach_next_.begin(), mach_next_.end(), -1);
    for (const auto& s : seq) {
      for (std::size_t p = 1; p < s.size(); ++p) {
        mach_pred_[idx(s[p])] = s[p - 1];
        mach_next_[idx(s[p - 1])] = s[p];
      }
    }
    queue_.clear();
    for (int id = 0; id < n_; ++id) {
      indegree_[idx(id)] = (op_of_[idx(id)] > 0 ? 1 : 0) + (mach_pred_[idx(id)] >= 0 ? 1 : 0);
      if (indegree_[idx(id)] == 0) queue_.push_back(id);
    }
    makespan_ = 0;
    last_ = -1;
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const int id = queue_[head];
      Time s = 0;
      int pred = -1;
      if (op_of_[idx(id)] > 0) {
        const int jp = id - 1;
        s = start_[idx(jp)] + duration_of_[idx(jp)];
        pred = jp;
      }
      if (const int mp = mach_pred_[idx(id)]; mp >= 0) {
        const Time e = start_[idx(mp)] + duration_of_[idx(mp)];
        if (e >= s) {
          s = e;
          pred = mp;
        }
      }
      start_[idx(id)] = s;
      crit_pred_[idx(id)] = pred;
      const Time end = s + duration_of_[idx(id)];
      if (end > makespan_ || (end == makespan_ && id < last_)) {
        makespan_ = end;
        last_ = id;
      }
      if (op_of_[idx(id)] + 1 < job_length(inst_, job_of_[idx(id)])) {
        if (--indegree_[idx(id + 1)] == 0) queue_.push_back(id + 1);
      }
      if (const int mn = mach_next_[idx(id)]; mn >= 0) {
        if (--indegree_[idx(mn)] == 0) queue_.push_back(mn);
      }
    }
    return static_cast<int>(queue_.size()) == n_;
  }

  Time makespan() const { return makespan_; }

  // Adjacent pairs (a, b) on the critical path where b follows a on the same machine.
  void critical_swaps(std::vector<std::pair<int, int>>& out) const {
    out.clear();
    int id = last_;
    while (id >= 0) {
      const int pred = crit_pred_[idx(id)];
      if (pred >= 0 && mach_pred_[idx(id)] == pred) out.emplace_back(pred, id);
      id = pred;
    }
  }

  std::vector<std::vector<Time>> starts() const {
    std::vector<std::vector<Time>> s(idx(inst_.num_jobs()));
    for (int j = 0; j < inst_.num_jobs(); ++j) {
      for (int k = 0; k < job_length(inst_, j); ++k) s[idx(j)].push_back(start_[idx(op_id(j, k))]);
    }
    return s;
  }

 private:
  const JsspInstance& inst_;
  int n_ = 0;
  std::vector<int> first_, job_of_, op_of_, machine_of_, duration_of_;
  std::vector<Time> start_;
  std::vector<int> crit_pred_, mach_pred_, mach_next_, indegree_, queue_;
  Time makespan_ = 0;
  int last_ = -1;
};

double unit_real(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

std::string_view to_string(DispatchRule rule) {
  switch (rule) {
    case DispatchRule::SPT: return "SPT";
    case DispatchRule::LPT: return "LPT";
    case DispatchRule::FIFO: return "FIFO";
    case DispatchRule::MWR: return "MWR";
  }
  return "?";
}

Time brute_force_oracle(const JsspInstance& instance) {
  if (instance.total_operations() > kOracleMaxOperations) {
    throw Error(ErrorCode::TooLargeForOracle, std::to_string(instance.total_operations()) +
                                                  " operations exceed the oracle cap of " +
                                                  std::to_string(kOracleMaxOperations));
  }
  return OracleSearch(instance).run();
}

Schedule dispatch_heuristic(const JsspInstance& instance, DispatchRule rule) {
  const int jobs = instance.num_jobs();
  std::vector<int> next(idx(jobs), 0);
  std::vector<Time> job_ready(idx(jobs), 0);
  std::vector<Time> mach_ready(idx(instance.num_machines()), 0);
  std::vector<Time> remaining(idx(jobs), 0);
  for (int j = 0; j < jobs; ++j) {
    for (const auto& o : instance.job(j)) remaining[idx(j)] += o.duration;
  }
  std::vector<ScheduledOp> ops;
  ops.reserve(idx(instance.total_operations()));

  // Rule key for job j's ready operation; smaller is preferred.
  auto key = [&](int j) -> Time {
    const auto& o = instance.op(j, next[idx(j)]);
    switch (rule) {
      case DispatchRule::SPT: return o.duration;
      case DispatchRule::LPT: return -o.duration;
      case DispatchRule::FIFO: return job_ready[idx(j)];
      case DispatchRule::MWR: return -remaining[idx(j)];
    }
    return 0;
  };

  for (int step = 0; step < instance.total_operations(); ++step) {
    Time earliest = kInfinity;
    for (int j = 0; j < jobs; ++j) {
      if (next[idx(j)] >= job_length(instance, j)) continue;
      const auto& o = instance.op(j, next[idx(j)]);
      earliest = std::min(earliest, std::max(job_ready[idx(j)], mach_ready[idx(o.machine)]));
    }
    int chosen = -1;
    Time chosen_key = 0;
    for (int j = 0; j < jobs; ++j) {
      if (next[idx(j)] >= job_length(instance, j)) continue;
      const auto& o = instance.op(j, next[idx(j)]);
      if (std::max(job_ready[idx(j)], mach_ready[idx(o.machine)]) != earliest) continue;
      const Time k = key(j);
      if (chosen < 0 || k < chosen_key) {
        chosen = j;
        chosen_key = k;
      }
    }
    const int k = next[idx(chosen)];
    const auto& o = instance.op(chosen, k);
    ops.push_back(ScheduledOp::make(chosen, k, o.machine, earliest, o.duration));
    job_ready[idx(chosen)] = earliest + o.duration;
    mach_ready[idx(o.machine)] = earliest + o.duration;
    remaining[idx(chosen)] -= o.duration;
    ++next[idx(chosen)];
  }
  return Schedule(instance, std::move(ops));
}

Schedule best_dispatch(const JsspInstance& instance) {
  std::optional<Schedule> best;
  for (auto rule : kAllRules) {
    Schedule s = dispatch_heuristic(instance, rule);
    if (!best || s.makespan() < best->makespan()) best = std::move(s);
  }
  return *best;
}

SolveResult solve_exact(const JsspInstance& instance, const ExactOptions& options) {
  const auto t0 = Clock::now();
  Schedule seed = best_dispatch(instance);
  if (options.incumbent && options.incumbent->makespan() < seed.makespan()) seed = *options.incumbent;
  BranchAndBound search(instance, options, seed);
  search.run();

  SolveResult result;
  result.schedule = search.best() < seed.makespan() ? Schedule::from_starts(instance, search.best_starts()) : seed;
  result.proven_optimal = search.completed();
  result.nodes_explored = search.nodes();
  result.lower_bound = search.completed() ? result.schedule.makespan()
                                          : std::max(search.root_bound(), trivial_lower_bound(instance));
  result.incumbent_trace = {seed.makespan()};
  if (result.schedule.makespan() < seed.makespan()) result.incumbent_trace.push_back(result.schedule.makespan());
  result.elapsed = Clock::now() - t0;
  return result;
}

SolveResult solve_anytime(const JsspInstance& instance, const AnytimeOptions& options) {
  const auto t0 = Clock::now();
  const auto deadline = t0 + std::chrono::duration_cast<Clock::duration>(options.time_limit);
  const Time lower = trivial_lower_bound(instance);
  const Schedule seed = best_dispatch(instance);

  SequenceEvaluator eval(instance);
  std::vector<std::vector<int>> current(idx(instance.num_machines()));
  {
    auto ordered = seed.ops();
    std::sort(ordered.begin(), ordered.end(), [](const ScheduledOp& a, const ScheduledOp& b) {
      return a.start != b.start ? a.start < b.start : a.job < b.job;
    });
    for (const auto& o : ordered) current[idx(o.machine)].push_back(eval.op_id(o.job, o.op));
  }
  eval.evaluate(current);
  Time current_ms = eval.makespan();
  Time best_ms = current_ms;
  auto best_starts = eval.starts();

  SolveResult result;
  result.incumbent_trace.push_back(best_ms);

  double mean_duration = 0;
  for (const auto& job : instance.jobs()) {
    for (const auto& o : job) mean_duration += o.duration;
  }
  mean_duration /= instance.total_operations();
  const double t_start = std::max(1.0, 0.5 * mean_duration);
  const double t_floor = 0.01 * t_start;
  constexpr double kCooling = 0.9995;
  double temperature = t_start;

  std::mt19937_64 rng(options.seed);
  std::vector<std::pair<int, int>> moves;
  std::uint64_t iter = 0;
  std::uint64_t stall = 0;
  while (best_ms > lower && iter < options.max_iterations && stall < options.stall_iterations) {
    if ((iter & 255U) == 0 && Clock::now() > deadline) break;
    ++iter;
    eval.evaluate(current);
    eval.critical_swaps(moves);
    if (moves.empty()) break;
    const auto [a, b] = moves[idx(uniform_int(rng, 0, static_cast<int>(moves.size()) - 1))];
    auto& seq = current[idx(eval.machine_of(a))];
    const auto pos = std::find(seq.begin(), seq.end(), a);
    std::iter_swap(pos, pos + 1);
    const bool acyclic = eval.evaluate(current);
    const Time candidate = eval.makespan();
    const Time delta = candidate - current_ms;
    if (acyclic && (delta <= 0 || unit_real(rng) < std::exp(-static_cast<double>(delta) / temperature))) {
      current_ms = candidate;
      if (candidate < best_ms) {
        best_ms = candidate;
        best_starts = eval.starts();
        result.incumbent_trace.push_back(best_ms);
        stall = 0;
      } else {
        ++stall;
      }
    } else {
      std::iter_swap(pos, pos + 1);
      ++stall;
    }
    temperature *= kCooling;
    if (temperature < t_floor) temperature = t_start;
  }

  result.schedule = best_ms < seed.makespan() ? Schedule::from_starts(instance, best_starts) : seed;
  result.proven_optimal = result.schedule.makespan() == lower;
  result.lower_bound = lower;
  result.nodes_explored = iter;
  result.elapsed = Clock::now() - t0;
  return result;
}

std::vector<SolveResult> solve_batch(const std::vector<JsspInstance>& instances, const AnytimeOptions& options,
                                     int workers) {
  std::vector<SolveResult> out(instances.size());
  parallel_for(instances.size(), workers, [&](std::size_t i) {
    AnytimeOptions o = options;
    o.seed = derive_seed(options.seed, i);
    out[i] = solve_anytime(instances[i], o);
  });
  return out;
}

std::vector<SolveResult> solve_batch_serial(const std::vector<JsspInstance>& instances,
                                            const AnytimeOptions& options) {
  std::vector<SolveResult> out;
  out.reserve(instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    AnytimeOptions o = options;
    o.seed = derive_seed(options.seed, i);
    out.push_back(solve_anytime(instances[i], o));
  }
  return out;
}

}  // namespace jssp
