#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jssp/evalkit.hpp"
#include "jssp/json_io.hpp"
#include "jssp/llm_client.hpp"
#include "jssp/nlcodec.hpp"

namespace jssp {

struct EvalInstance {
  std::string id;
  JsspInstance instance;
  std::optional<double> reference;
  bool reference_proven_optimal = false;
};

/// JSONL with at least {"id", "matrix"}; dataset records qualify. A makespan
/// in the record (field or matrix trailer) becomes the reference.
std::vector<EvalInstance> load_instances(const std::filesystem::path& path);

/// JSONL of {"id", "makespan", "proven_optimal"?}; overrides references by id.
void apply_references(std::vector<EvalInstance>& instances, const std::filesystem::path& path);

struct RunConfig {
  SamplingParams params;
  RetryPolicy retry;
  std::string model;
  NlStyle style = NlStyle::MachineCentric;
  EvalOptions eval;
  /// Instances in flight at once.
  int workers = 1;
};

/// Candidate texts per instance id, in request order (replay file content).
using CandidateLog = std::vector<std::pair<std::string, std::vector<std::string>>>;

/// System message plus the fixed "Instruct:" prompt over the problem text.
CompletionRequest make_eval_request(const EvalInstance& item, const RunConfig& config);

/// Per instance: sample candidates, keep the best feasible one, compare with
/// the reference. Instances without a reference are skipped and counted.
EvalReport run_eval(const std::vector<EvalInstance>& instances, ChatTransport& transport, const RunConfig& config,
                    CandidateLog* log = nullptr);

std::string to_replay_jsonl(const CandidateLog& log);

/// report.json and report.txt under prefix (prefix + ".json", prefix + ".txt").
void write_report(const EvalReport& report, const std::filesystem::path& prefix);

struct GridPoint {
  SamplingParams params;
  EvalReport report;
};

struct GridResult {
  std::vector<GridPoint> points;
  /// Lowest mean gap; points without any feasible candidate rank last.
  std::optional<std::size_t> best;
};

inline const std::vector<int> kGridTopK = {10, 20, 50};
inline const std::vector<double> kGridTemperature = {0.2, 0.5, 0.7, 1.0};
inline const std::vector<double> kGridTopP = {0.8, 0.9, 0.95};

GridResult grid_search(const std::vector<EvalInstance>& instances, ChatTransport& transport, const RunConfig& base,
                       const std::vector<int>& top_k = kGridTopK,
                       const std::vector<double>& temperature = kGridTemperature,
                       const std::vector<double>& top_p = kGridTopP);

}  // namespace jssp
