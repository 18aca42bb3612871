#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "jssp/core.hpp"
#include "jssp/nlcodec.hpp"

namespace jssp {

enum class ViolationKind {
  WrongMachine,
  WrongDuration,
  MachineOverlap,
  PrecedenceViolation,
  MissingOperation,
  DuplicateOperation,
  UnknownOperation,
  MakespanMismatch,
  ArithmeticDefect,
};

std::string_view to_string(ViolationKind kind);

struct OpRef {
  int job = 0;
  int op = 0;
  friend bool operator==(const OpRef&, const OpRef&) = default;
};

struct MachinePair {
  int machine = 0;
  OpRef first;
  OpRef second;
  friend bool operator==(const MachinePair&, const MachinePair&) = default;
};

/// MachineOverlap carries a MachinePair; MakespanMismatch carries no subject;
/// PrecedenceViolation names the later operation; every other kind an OpRef.
using ViolationSubject = std::variant<std::monostate, OpRef, MachinePair>;

struct Violation {
  ViolationKind kind = ViolationKind::WrongMachine;
  ViolationSubject subject;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  /// Present only when every operation appears exactly once.
  std::optional<Time> computed_makespan;

  /// No violations other than MakespanMismatch.
  bool feasible() const noexcept;
  bool clean() const noexcept { return violations.empty(); }
  std::size_t count(ViolationKind kind) const;
};

/// Machine and duration of every extracted op against the instance, plus
/// coverage (unknown, missing, duplicate operations).
std::vector<Violation> check_operations(const JsspInstance& instance, const ParsedSolution& parsed);

/// Per machine, sorted by start: an op overlapping the latest-ending earlier op
/// on that machine. Touching intervals (end == next start) are legal.
std::vector<Violation> check_machine_conflicts(const ParsedSolution& parsed);

/// Per job, sorted by op index: op k ending after op k+1 starts. Equality is legal.
std::vector<Violation> check_precedence(const ParsedSolution& parsed);

/// All checks, arithmetic defects, and the claimed makespan against the
/// computed one (exact comparison).
ValidationReport validate(const JsspInstance& instance, const ParsedSolution& parsed);

/// Validates raw model text; text with no operation lines is an empty parse.
ValidationReport validate_text(const JsspInstance& instance, std::string_view text);

/// Same as calling validate_text per candidate, on OpenMP workers.
std::vector<ValidationReport> validate_many(const JsspInstance& instance, const std::vector<std::string>& texts,
                                            int workers = 0);
std::vector<ValidationReport> validate_many_serial(const JsspInstance& instance,
                                                   const std::vector<std::string>& texts);

}  // namespace jssp
