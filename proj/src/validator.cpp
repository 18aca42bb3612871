#include "jssp/validator.hpp"

#include <algorithm>
#include <map>

#include "jssp/parallel.hpp"

namespace jssp {

namespace {

std::string op_name(int job, int op) { return "job " + std::to_string(job) + " operation " + std::to_string(op); }

}  // namespace

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::WrongMachine: return "WrongMachine";
    case ViolationKind::WrongDuration: return "WrongDuration";
    case ViolationKind::MachineOverlap: return "MachineOverlap";
    case ViolationKind::PrecedenceViolation: return "PrecedenceViolation";
    case ViolationKind::MissingOperation: return "MissingOperation";
    case ViolationKind::DuplicateOperation: return "DuplicateOperation";
    case ViolationKind::UnknownOperation: return "UnknownOperation";
    case ViolationKind::MakespanMismatch: return "MakespanMismatch";
    case ViolationKind::ArithmeticDefect: return "ArithmeticDefect";
  }
  return "Unknown";
}

bool ValidationReport::feasible() const noexcept {
  return std::all_of(violations.begin(), violations.end(),
                     [](const Violation& v) { return v.kind == ViolationKind::MakespanMismatch; });
}

std::size_t ValidationReport::count(ViolationKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(violations.begin(), violations.end(), [kind](const Violation& v) { return v.kind == kind; }));
}

std::vector<Violation> check_operations(const JsspInstance& instance, const ParsedSolution& parsed) {
  std::vector<Violation> out;
  std::vector<std::vector<int>> seen(static_cast<std::size_t>(instance.num_jobs()));
  for (int j = 0; j < instance.num_jobs(); ++j) seen[static_cast<std::size_t>(j)].assign(instance.job(j).size(), 0);

  for (const auto& o : parsed.ops) {
    if (o.job < 0 || o.job >= instance.num_jobs() || o.op < 0 ||
        o.op >= static_cast<int>(instance.job(o.job).size())) {
      out.push_back({ViolationKind::UnknownOperation, OpRef{o.job, o.op},
                     op_name(o.job, o.op) + " does not exist in the instance"});
      continue;
    }
    const auto& ref = instance.op(o.job, o.op);
    if (o.machine != ref.machine) {
      out.push_back({ViolationKind::WrongMachine, OpRef{o.job, o.op},
                     op_name(o.job, o.op) + " runs on machine " + std::to_string(o.machine) + ", expected " +
                         std::to_string(ref.machine)});
    }
    if (o.duration != ref.duration) {
      out.push_back({ViolationKind::WrongDuration, OpRef{o.job, o.op},
                     op_name(o.job, o.op) + " lasts " + std::to_string(o.duration) + ", expected " +
                         std::to_string(ref.duration)});
    }
    if (++seen[static_cast<std::size_t>(o.job)][static_cast<std::size_t>(o.op)] == 2) {
      out.push_back({ViolationKind::DuplicateOperation, OpRef{o.job, o.op}, op_name(o.job, o.op) + " appears more than once"});
    }
  }
  for (int j = 0; j < instance.num_jobs(); ++j) {
    for (int k = 0; k < static_cast<int>(instance.job(j).size()); ++k) {
      if (seen[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] == 0) {
        out.push_back({ViolationKind::MissingOperation, OpRef{j, k}, op_name(j, k) + " is not scheduled"});
      }
    }
  }
  return out;
}

std::vector<Violation> check_machine_conflicts(const ParsedSolution& parsed) {
  std::map<int, std::vector<ScheduledOp>> by_machine;
  for (const auto& o : parsed.ops) by_machine[o.machine].push_back(o);

  std::vector<Violation> out;
  for (auto& [machine, ops] : by_machine) {
    std::sort(ops.begin(), ops.end(), [](const ScheduledOp& a, const ScheduledOp& b) {
      if (a.start != b.start) return a.start < b.start;
      if (a.end != b.end) return a.end < b.end;
      if (a.job != b.job) return a.job < b.job;
      return a.op < b.op;
    });
    for (std::size_t i = 1, holder = 0; i < ops.size(); ++i) {
      const auto& prev = ops[holder];
      const auto& next = ops[i];
      if (prev.end > next.start) {
        out.push_back({ViolationKind::MachineOverlap,
                       MachinePair{machine, OpRef{prev.job, prev.op}, OpRef{next.job, next.op}},
                       "machine " + std::to_string(machine) + ": " + op_name(prev.job, prev.op) + " ends at " +
                           std::to_string(prev.end) + " after " + op_name(next.job, next.op) + " starts at " +
                           std::to_string(next.start)});
      }
      if (next.end > prev.end) holder = i;
    }
  }
  return out;
}

std::vector<Violation> check_precedence(const ParsedSolution& parsed) {
  std::map<int, std::vector<ScheduledOp>> by_job;
  for (const auto& o : parsed.ops) by_job[o.job].push_back(o);

  std::vector<Violation> out;
  for (auto& [job, ops] : by_job) {
    std::sort(ops.begin(), ops.end(), [](const ScheduledOp& a, const ScheduledOp& b) {
      if (a.op != b.op) return a.op < b.op;
      if (a.start != b.start) return a.start < b.start;
      return a.end < b.end;
    });
    for (std::size_t i = 1; i < ops.size(); ++i) {
      const auto& prev = ops[i - 1];
      const auto& next = ops[i];
      if (prev.op == next.op) continue;
      if (prev.end > next.start) {
        out.push_back({ViolationKind::PrecedenceViolation, OpRef{next.job, next.op},
                       op_name(next.job, next.op) + " starts at " + std::to_string(next.start) +
                           " before operation " + std::to_string(prev.op) + " ends at " + std::to_string(prev.end)});
      }
    }
  }
  return out;
}

ValidationReport validate(const JsspInstance& instance, const ParsedSolution& parsed) {
  ValidationReport report;
  auto append = [&](std::vector<Violation> v) {
    report.violations.insert(report.violations.end(), std::make_move_iterator(v.begin()),
                             std::make_move_iterator(v.end()));
  };
  append(check_operations(instance, parsed));
  for (const auto& o : parsed.ops) {
    if (!o.consistent()) {
      report.violations.push_back({ViolationKind::ArithmeticDefect, OpRef{o.job, o.op},
                                   op_name(o.job, o.op) + ": " + std::to_string(o.start) + " + " +
                                       std::to_string(o.duration) + " != " + std::to_string(o.end)});
    }
  }
  append(check_machine_conflicts(parsed));
  append(check_precedence(parsed));

  const bool complete = std::none_of(report.violations.begin(), report.violations.end(), [](const Violation& v) {
    return v.kind == ViolationKind::MissingOperation || v.kind == ViolationKind::DuplicateOperation ||
           v.kind == ViolationKind::UnknownOperation;
  });
  if (complete && !parsed.ops.empty()) report.computed_makespan = makespan_of(parsed.ops);

  if (parsed.claimed_makespan && !parsed.ops.empty()) {
    const Time max_end = makespan_of(parsed.ops);
    if (*parsed.claimed_makespan != static_cast<double>(max_end)) {
      report.violations.push_back({ViolationKind::MakespanMismatch, std::monostate{},
                                   "claimed makespan " + format_makespan(*parsed.claimed_makespan) +
                                       " but the latest operation ends at " + std::to_string(max_end)});
    }
  }
  return report;
}

ValidationReport validate_text(const JsspInstance& instance, std::string_view text) {
  ParsedSolution parsed;
  try {
    parsed = parse_solution_nl(text);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoOperationsFound) throw;
  }
  return validate(instance, parsed);
}

std::vector<ValidationReport> validate_many(const JsspInstance& instance, const std::vector<std::string>& texts,
                                            int workers) {
  std::vector<ValidationReport> out(texts.size());
  parallel_for(texts.size(), workers, [&](std::size_t i) { out[i] = validate_text(instance, texts[i]); });
  return out;
}

std::vector<ValidationReport> validate_many_serial(const JsspInstance& instance,
                                                   const std::vector<std::string>& texts) {
  std::vector<ValidationReport> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(validate_text(instance, t));
  return out;
}

}  // namespace jssp
