#include "jssp/json_io.hpp"

#include <fstream>
#include <sstream>

namespace jssp {

Json to_json(const Violation& v) {
  Json j;
  j["kind"] = std::string(to_string(v.kind));
  if (const auto* op = std::get_if<OpRef>(&v.subject)) {
    j["job"] = op->job;
    j["operation"] = op->op;
  } else if (const auto* pair = std::get_if<MachinePair>(&v.subject)) {
    j["machine"] = pair->machine;
    j["first"] = {{"job", pair->first.job}, {"operation", pair->first.op}};
    j["second"] = {{"job", pair->second.job}, {"operation", pair->second.op}};
  }
  j["detail"] = v.detail;
  return j;
}

Json to_json(const ValidationReport& report) {
  Json j;
  j["feasible"] = report.feasible();
  j["computed_makespan"] = report.computed_makespan ? Json(*report.computed_makespan) : Json(nullptr);
  Json list = Json::array();
  for (const auto& v : report.violations) list.push_back(to_json(v));
  j["violations"] = std::move(list);
  return j;
}

Json to_json(const SolveResult& result, bool include_timing) {
  Json j;
  j["makespan"] = result.schedule.makespan();
  j["proven_optimal"] = result.proven_optimal;
  j["lower_bound"] = result.lower_bound;
  j["nodes_explored"] = result.nodes_explored;
  if (include_timing) j["elapsed_seconds"] = result.elapsed.count();
  Json ops = Json::array();
  for (const auto& o : result.schedule.ops()) {
    ops.push_back({{"job", o.job},
                   {"operation", o.op},
                   {"machine", o.machine},
                   {"start", o.start},
                   {"duration", o.duration},
                   {"end", o.end}});
  }
  j["schedule"] = std::move(ops);
  return j;
}

Json to_json(const GapStats& s) {
  Json j;
  j["count"] = s.count;
  j["mean"] = s.mean;
  j["std"] = s.std;
  j["min"] = s.min;
  j["25%"] = s.p25;
  j["50%"] = s.p50;
  j["75%"] = s.p75;
  j["max"] = s.max;
  return j;
}

Json to_json(const EvalOutcome& o) {
  Json j;
  j["id"] = o.instance_id;
  j["n_candidates"] = o.n_candidates;
  j["n_feasible"] = o.n_feasible;
  j["best_makespan"] = o.best_makespan ? Json(*o.best_makespan) : Json(nullptr);
  j["reference_makespan"] = o.reference_makespan;
  j["reference_proven_optimal"] = o.reference_proven_optimal;
  j["gap_percent"] = o.gap_percent ? Json(*o.gap_percent) : Json(nullptr);
  return j;
}

Json to_json(const EvalReport& r) {
  Json j;
  j["instances"] = r.instances;
  j["with_feasible"] = r.with_feasible;
  j["feasibility_rate"] = r.feasibility_rate;
  j["infeasible_rate"] = r.infeasible_rate;
  j["skipped"] = r.skipped;
  j["gap_stats"] = r.gaps ? to_json(*r.gaps) : Json(nullptr);
  j["gap_stats_proven_optimal"] = r.gaps_proven_optimal ? to_json(*r.gaps_proven_optimal) : Json(nullptr);
  Json outcomes = Json::array();
  for (const auto& o : r.outcomes) outcomes.push_back(to_json(o));
  j["outcomes"] = std::move(outcomes);
  return j;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

std::vector<Json> read_jsonl(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::vector<Json> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(Json::parse(line));
    } catch (const Json::parse_error& e) {
      throw Error(ErrorCode::BadRecord, path.string() + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace jssp
