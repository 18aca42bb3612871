#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jssp/core.hpp"
#include "jssp/validator.hpp"

namespace jssp {

/// 100 * (makespan - reference) / reference. Throws InvalidReference when reference <= 0.
double gap_percent(double makespan, double reference);

struct GapStats {
  std::size_t count = 0;
  double mean = 0;
  double std = 0;
  double min = 0;
  double p25 = 0;
  double p50 = 0;
  double p75 = 0;
  double max = 0;

  friend bool operator==(const GapStats&, const GapStats&) = default;
};

/// Quantile of sorted data by linear interpolation at position q * (n - 1).
double quantile_sorted(const std::vector<double>& sorted, double q);

/// Mean, sample standard deviation (n - 1 divisor, 0 for one value), min,
/// interpolated quartiles and max. Throws EmptyInput.
GapStats summarize_gaps(std::vector<double> gaps);

struct Selection {
  std::size_t n_candidates = 0;
  std::size_t n_feasible = 0;
  std::optional<std::size_t> best_index;
  std::optional<Time> best_makespan;
  std::optional<ParsedSolution> best;
};

/// Parses and validates every candidate, keeps the feasible one with the
/// smallest computed makespan (lowest index on ties).
Selection select_best(const JsspInstance& instance, const std::vector<std::string>& candidates, int workers = 1);

struct EvalOutcome {
  std::string instance_id;
  std::size_t n_candidates = 0;
  std::size_t n_feasible = 0;
  std::optional<Time> best_makespan;
  double reference_makespan = 0;
  bool reference_proven_optimal = false;
  std::optional<double> gap_percent;
};

EvalOutcome make_outcome(std::string instance_id, const Selection& selection, double reference_makespan,
                         bool reference_proven_optimal);

struct EvalOptions {
  /// When set, instances with no feasible candidate contribute this gap
  /// instead of being left out of the statistics.
  std::optional<double> infeasible_penalty_gap;
};

struct EvalReport {
  std::size_t instances = 0;
  std::size_t with_feasible = 0;
  /// Fraction of instances with at least one feasible candidate.
  double feasibility_rate = 0;
  /// Fraction with none.
  double infeasible_rate = 0;
  std::size_t skipped = 0;
  std::optional<GapStats> gaps;
  std::optional<GapStats> gaps_proven_optimal;
  std::vector<EvalOutcome> outcomes;
};

/// Aggregates outcomes. Throws EmptyInput on an empty list.
EvalReport evaluate_run(const std::vector<EvalOutcome>& outcomes, const EvalOptions& options = {});

/// Row labels of the text table, in order.
inline constexpr const char* kStatRows[] = {"count", "mean", "std", "min", "25%", "50%", "75%", "max"};

/// Aligned two-column table: label, value (two decimals; count as integer).
std::string render_gap_table(const GapStats& stats, const std::string& column = "gap");

std::string render_report_text(const EvalReport& report);

}  // namespace jssp
