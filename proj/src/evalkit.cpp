#include "jssp/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace jssp {

double gap_percent(double makespan, double reference) {
  if (!(reference > 0)) throw Error(ErrorCode::InvalidReference, "reference makespan must be positive");
  return 100.0 * (makespan - reference) / reference;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw Error(ErrorCode::EmptyInput, "quantile of no values");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

GapStats summarize_gaps(std::vector<double> gaps) {
  if (gaps.empty()) throw Error(ErrorCode::EmptyInput, "no gaps to summarize");
  std::sort(gaps.begin(), gaps.end());
  GapStats s;
  s.count = gaps.size();
  // Summing in sorted order makes the result independent of input order.
  s.mean = std::accumulate(gaps.begin(), gaps.end(), 0.0) / static_cast<double>(s.count);
  if (s.count > 1) {
    double ss = 0;
    for (double g : gaps) ss += (g - s.mean) * (g - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(s.count - 1));
  }
  s.min = gaps.front();
  s.max = gaps.back();
  s.mean = std::clamp(s.mean, s.min, s.max);
  s.p25 = quantile_sorted(gaps, 0.25);
  s.p50 = quantile_sorted(gaps, 0.50);
  s.p75 = quantile_sorted(gaps, 0.75);
  return s;
}

Selection select_best(const JsspInstance& instance, const std::vector<std::string>& candidates, int workers) {
  const auto reports = validate_many(instance, candidates, workers);
  Selection sel;
  sel.n_candidates = candidates.size();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    if (!r.feasible() || !r.computed_makespan) continue;
    ++sel.n_feasible;
    if (!sel.best_makespan || *r.computed_makespan < *sel.best_makespan) {
      sel.best_makespan = r.computed_makespan;
      sel.best_index = i;
    }
  }
  if (sel.best_index) sel.best = parse_solution_nl(candidates[*sel.best_index]);
  return sel;
}

EvalOutcome make_outcome(std::string instance_id, const Selection& selection, double reference_makespan,
                         bool reference_proven_optimal) {
  EvalOutcome o;
  o.instance_id = std::move(instance_id);
  o.n_candidates = selection.n_candidates;
  o.n_feasible = selection.n_feasible;
  o.best_makespan = selection.best_makespan;
  o.reference_makespan = reference_makespan;
  o.reference_proven_optimal = reference_proven_optimal;
  if (o.best_makespan) o.gap_percent = gap_percent(static_cast<double>(*o.best_makespan), reference_makespan);
  return o;
}

EvalReport evaluate_run(const std::vector<EvalOutcome>& outcomes, const EvalOptions& options) {
  if (outcomes.empty()) throw Error(ErrorCode::EmptyInput, "no outcomes to evaluate");
  EvalReport rep;
  rep.instances = outcomes.size();
  rep.outcomes = outcomes;
  std::vector<double> gaps;
  std::vector<double> proven;
  for (const auto& o : outcomes) {
    std::optional<double> g = o.gap_percent;
    if (g) {
      ++rep.with_feasible;
    } else if (options.infeasible_penalty_gap) {
      g = options.infeasible_penalty_gap;
    }
    if (!g) continue;
    gaps.push_back(*g);
    if (o.reference_proven_optimal) proven.push_back(*g);
  }
  rep.feasibility_rate = static_cast<double>(rep.with_feasible) / static_cast<double>(rep.instances);
  rep.infeasible_rate = 1.0 - rep.feasibility_rate;
  if (!gaps.empty()) rep.gaps = summarize_gaps(gaps);
  if (!proven.empty()) rep.gaps_proven_optimal = summarize_gaps(proven);
  return rep;
}

namespace {

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string render_gap_table(const GapStats& stats, const std::string& column) {
  const std::string values[] = {std::to_string(stats.count), fixed2(stats.mean), fixed2(stats.std),
                                fixed2(stats.min),           fixed2(stats.p25),  fixed2(stats.p50),
                                fixed2(stats.p75),           fixed2(stats.max)};
  std::size_t width = column.size();
  for (const auto& v : values) width = std::max(width, v.size());
  constexpr std::size_t kLabel = 6;

  std::string out(kLabel, ' ');
  out += "  " + std::string(width - column.size(), ' ') + column + "\n";
  for (std::size_t i = 0; i < std::size(kStatRows); ++i) {
    std::string label = kStatRows[i];
    label.resize(kLabel, ' ');
    out += label + "  " + std::string(width - values[i].size(), ' ') + values[i] + "\n";
  }
  return out;
}

std::string render_report_text(const EvalReport& report) {
  std::string out;
  out += "instances:        " + std::to_string(report.instances) + "\n";
  out += "with feasible:    " + std::to_string(report.with_feasible) + "\n";
  out += "feasibility rate: " + fixed2(report.feasibility_rate) + "\n";
  out += "skipped:          " + std::to_string(report.skipped) + "\n\n";
  if (report.gaps) {
    out += render_gap_table(*report.gaps, "gap %");
  } else {
    out += "no feasible solutions, gap statistics empty\n";
  }
  return out;
}

}  // namespace jssp
