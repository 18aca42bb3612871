#include "jssp/core.hpp"

#include <algorithm>

namespace jssp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInstance: return "InvalidInstance";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidMachine: return "InvalidMachine";
    case ErrorCode::InvalidJob: return "InvalidJob";
    case ErrorCode::EmptySchedule: return "EmptySchedule";
    case ErrorCode::InconsistentOp: return "InconsistentOp";
    case ErrorCode::BadHeader: return "BadHeader";
    case ErrorCode::BadJobRow: return "BadJobRow";
    case ErrorCode::BadPreamble: return "BadPreamble";
    case ErrorCode::NonContiguousOps: return "NonContiguousOps";
    case ErrorCode::DuplicateOp: return "DuplicateOp";
    case ErrorCode::CoverageError: return "CoverageError";
    case ErrorCode::NoOperationsFound: return "NoOperationsFound";
    case ErrorCode::TooLargeForOracle: return "TooLargeForOracle";
    case ErrorCode::InvalidReference: return "InvalidReference";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::EndpointUnavailable: return "EndpointUnavailable";
    case ErrorCode::ApiError: return "ApiError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::BadRecord: return "BadRecord";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

JsspInstance::JsspInstance(int num_jobs, int num_machines, std::vector<std::vector<Operation>> jobs)
    : num_jobs_(num_jobs), num_machines_(num_machines), jobs_(std::move(jobs)) {
  if (num_jobs_ < 1 || num_machines_ < 1) {
    throw Error(ErrorCode::InvalidInstance, "instance needs at least one job and one machine");
  }
  if (jobs_.size() != static_cast<std::size_t>(num_jobs_)) {
    throw Error(ErrorCode::InvalidInstance, "expected " + std::to_string(num_jobs_) + " jobs, got " +
                                                std::to_string(jobs_.size()));
  }
  for (std::size_t j = 0; j < jobs_.size(); ++j) {
    if (jobs_[j].empty()) {
      throw Error(ErrorCode::InvalidInstance, "job " + std::to_string(j) + " has no operations");
    }
    for (const auto& o : jobs_[j]) {
      if (o.machine < 0 || o.machine >= num_machines_) {
        throw Error(ErrorCode::InvalidMachine, "job " + std::to_string(j) + " uses machine " +
                                                   std::to_string(o.machine));
      }
      if (o.duration <= 0) {
        throw Error(ErrorCode::InvalidInstance, "job " + std::to_string(j) + " has non-positive duration");
      }
    }
  }
}

int JsspInstance::total_operations() const noexcept {
  int n = 0;
  for (const auto& j : jobs_) n += static_cast<int>(j.size());
  return n;
}

bool JsspInstance::is_permutation_form() const noexcept {
  std::vector<int> seen;
  for (const auto& j : jobs_) {
    if (j.size() != static_cast<std::size_t>(num_machines_)) return false;
    seen.assign(static_cast<std::size_t>(num_machines_), 0);
    for (const auto& o : j) {
      if (seen[static_cast<std::size_t>(o.machine)]++) return false;
    }
  }
  return true;
}

Time makespan_of(std::span<const ScheduledOp> ops) {
  if (ops.empty()) throw Error(ErrorCode::EmptySchedule, "cannot take the makespan of no operations");
  Time best = ops.front().end;
  for (const auto& o : ops) best = std::max(best, o.end);
  return best;
}

Schedule::Schedule(const JsspInstance& instance, std::vector<ScheduledOp> ops) : ops_(std::move(ops)) {
  std::vector<std::vector<int>> seen(static_cast<std::size_t>(instance.num_jobs()));
  for (int j = 0; j < instance.num_jobs(); ++j) seen[static_cast<std::size_t>(j)].assign(instance.job(j).size(), 0);
  for (const auto& o : ops_) {
    if (!o.consistent()) {
      throw Error(ErrorCode::InconsistentOp, "job " + std::to_string(o.job) + " op " + std::to_string(o.op) +
                                                 " has end != start + duration");
    }
    if (o.start < 0) throw Error(ErrorCode::InconsistentOp, "negative start time");
    if (o.job < 0 || o.job >= instance.num_jobs() || o.op < 0 ||
        o.op >= static_cast<int>(instance.job(o.job).size())) {
      throw Error(ErrorCode::CoverageError, "operation outside the instance");
    }
    const auto& ref = instance.op(o.job, o.op);
    if (ref.machine != o.machine || ref.duration != o.duration) {
      throw Error(ErrorCode::CoverageError, "operation data differs from the instance");
    }
    if (seen[static_cast<std::size_t>(o.job)][static_cast<std::size_t>(o.op)]++) {
      throw Error(ErrorCode::CoverageError, "operation scheduled twice");
    }
  }
  if (ops_.size() != static_cast<std::size_t>(instance.total_operations())) {
    throw Error(ErrorCode::CoverageError, "schedule does not cover every operation");
  }
  makespan_ = makespan_of(ops_);
}

Schedule Schedule::from_starts(const JsspInstance& instance, const std::vector<std::vector<Time>>& starts) {
  std::vector<ScheduledOp> ops;
  ops.reserve(static_cast<std::size_t>(instance.total_operations()));
  for (int j = 0; j < instance.num_jobs(); ++j) {
    for (int k = 0; k < static_cast<int>(instance.job(j).size()); ++k) {
      const auto& o = instance.op(j, k);
      ops.push_back(ScheduledOp::make(j, k, o.machine, starts.at(static_cast<std::size_t>(j)).at(static_cast<std::size_t>(k)),
                                      o.duration));
    }
  }
  return Schedule(instance, std::move(ops));
}

std::vector<std::vector<Time>> Schedule::starts(const JsspInstance& instance) const {
  std::vector<std::vector<Time>> s(static_cast<std::size_t>(instance.num_jobs()));
  for (int j = 0; j < instance.num_jobs(); ++j) s[static_cast<std::size_t>(j)].assign(instance.job(j).size(), 0);
  for (const auto& o : ops_) s[static_cast<std::size_t>(o.job)][static_cast<std::size_t>(o.op)] = o.start;
  return s;
}

Time instance_total_work(const JsspInstance& instance, int machine) {
  if (machine < 0 || machine >= instance.num_machines()) {
    throw Error(ErrorCode::InvalidMachine, "machine " + std::to_string(machine) + " out of range");
  }
  Time total = 0;
  for (const auto& job : instance.jobs()) {
    for (const auto& o : job) {
      if (o.machine == machine) total += o.duration;
    }
  }
  return total;
}

Time trivial_lower_bound(const JsspInstance& instance) {
  Time lb = 0;
  for (int m = 0; m < instance.num_machines(); ++m) lb = std::max(lb, instance_total_work(instance, m));
  for (const auto& job : instance.jobs()) {
    Time len = 0;
    for (const auto& o : job) len += o.duration;
    lb = std::max(lb, len);
  }
  return lb;
}

}  // namespace jssp
