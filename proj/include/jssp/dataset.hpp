#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "jssp/instgen.hpp"
#include "jssp/json_io.hpp"
#include "jssp/nlcodec.hpp"
#include "jssp/solver.hpp"

namespace jssp {

/// One supervised example. Serialized as one JSONL line with these field
/// names plus a "messages" array (system, user, assistant).
struct DatasetRecord {
  std::string id;
  int num_jobs = 0;
  int num_machines = 0;
  std::string matrix;
  std::string problem_nl;
  std::string solution_nl;
  double makespan = 0;
  bool proven_optimal = false;
  NlStyle style = NlStyle::MachineCentric;
  int prompt_variant = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

Json to_json(const DatasetRecord& record);
DatasetRecord record_from_json(const Json& j);

/// Throws BadRecord unless the matrix and problem text describe the same
/// instance and the solution validates feasible with the recorded makespan.
void check_record(const DatasetRecord& record);

/// Maps an externally produced example onto DatasetRecord. Accepts our own
/// field names, or "input"/"output" problem/solution text pairs; missing
/// matrix/problem text is regenerated and the makespan is recomputed.
DatasetRecord ingest_record(const Json& j, const std::string& fallback_id);

struct DatasetConfig {
  BatchSpec generation;
  /// Anytime budget per instance; the seed is the master solver seed.
  AnytimeOptions solver;
  /// Node budget for a branch-and-bound proof attempt after annealing; 0 disables it.
  std::uint64_t proof_node_limit = 2'000'000;
  NlStyle style = NlStyle::MachineCentric;
  /// Trailing records that go to the validation file.
  std::size_t validation_count = 0;
  int workers = 0;
};

struct DatasetSummary {
  std::vector<DatasetRecord> train;
  std::vector<DatasetRecord> validation;
  std::vector<std::pair<std::uint64_t, std::string>> skipped;
  Json manifest;
};

/// Generates, labels and self-checks records in generation order.
DatasetSummary build_dataset(const DatasetConfig& config);

/// build_dataset and write train.jsonl, validation.jsonl and manifest.json into out_dir.
DatasetSummary write_dataset(const DatasetConfig& config, const std::filesystem::path& out_dir);

std::string to_jsonl(const std::vector<DatasetRecord>& records);

}  // namespace jssp
