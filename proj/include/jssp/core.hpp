#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace jssp {

/// Time values (start, end, makespan) in integer time units.
using Time = std::int64_t;

enum class ErrorCode {
  InvalidInstance,
  InvalidSpec,
  InvalidMachine,
  InvalidJob,
  EmptySchedule,
  InconsistentOp,
  BadHeader,
  BadJobRow,
  BadPreamble,
  NonContiguousOps,
  DuplicateOp,
  CoverageError,
  NoOperationsFound,
  TooLargeForOracle,
  InvalidReference,
  EmptyInput,
  EndpointUnavailable,
  ApiError,
  IoError,
  BadRecord,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the toolkit carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct Operation {
  int machine = 0;
  int duration = 0;

  friend bool operator==(const Operation&, const Operation&) = default;
};

/// A job-shop problem: jobs[j] is the ordered chain of operations of job j.
class JsspInstance {
 public:
  JsspInstance() = default;

  /// Validates: at least one job and machine, every job non-empty, every
  /// machine id in range and every duration positive.
  JsspInstance(int num_jobs, int num_machines, std::vector<std::vector<Operation>> jobs);

  int num_jobs() const noexcept { return num_jobs_; }
  int num_machines() const noexcept { return num_machines_; }
  const std::vector<std::vector<Operation>>& jobs() const noexcept { return jobs_; }
  const std::vector<Operation>& job(int j) const { return jobs_.at(static_cast<std::size_t>(j)); }
  const Operation& op(int j, int k) const { return job(j).at(static_cast<std::size_t>(k)); }

  int total_operations() const noexcept;

  /// True when every job visits every machine exactly once.
  bool is_permutation_form() const noexcept;

  friend bool operator==(const JsspInstance&, const JsspInstance&) = default;

 private:
  int num_jobs_ = 0;
  int num_machines_ = 0;
  std::vector<std::vector<Operation>> jobs_;
};

struct ScheduledOp {
  int job = 0;
  int op = 0;
  int machine = 0;
  Time start = 0;
  int duration = 0;
  Time end = 0;

  static ScheduledOp make(int job, int op, int machine, Time start, int duration) {
    return ScheduledOp{job, op, machine, start, duration, start + duration};
  }
  bool consistent() const noexcept { return end == start + duration; }

  friend bool operator==(const ScheduledOp&, const ScheduledOp&) = default;
};

/// Maximum end over ops. Throws EmptySchedule on an empty list.
Time makespan_of(std::span<const ScheduledOp> ops);

/// Full assignment of start times. Construction checks end consistency and
/// coverage of the instance, and derives the makespan.
class Schedule {
 public:
  Schedule() = default;
  Schedule(const JsspInstance& instance, std::vector<ScheduledOp> ops);

  /// Builds from per-operation start times, starts[j][k].
  static Schedule from_starts(const JsspInstance& instance, const std::vector<std::vector<Time>>& starts);

  const std::vector<ScheduledOp>& ops() const noexcept { return ops_; }
  Time makespan() const noexcept { return makespan_; }

  /// starts[j][k] view of the schedule.
  std::vector<std::vector<Time>> starts(const JsspInstance& instance) const;

  friend bool operator==(const Schedule&, const Schedule&) = default;

 private:
  std::vector<ScheduledOp> ops_;
  Time makespan_ = 0;
};

/// Sum of durations of all operations assigned to machine.
Time instance_total_work(const JsspInstance& instance, int machine);

/// max over machines of total workload and over jobs of total job length.
Time trivial_lower_bound(const JsspInstance& instance);

}  // namespace jssp
