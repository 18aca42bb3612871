#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "jssp/evalkit.hpp"
#include "jssp/solver.hpp"
#include "jssp/validator.hpp"

namespace jssp {

using Json = nlohmann::ordered_json;

Json to_json(const Violation& v);
Json to_json(const ValidationReport& report);
Json to_json(const SolveResult& result, bool include_timing = true);
Json to_json(const GapStats& stats);
Json to_json(const EvalOutcome& outcome);
Json to_json(const EvalReport& report);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

/// One JSON value per non-blank line. Throws BadRecord with the line number on bad JSON.
std::vector<Json> read_jsonl(const std::filesystem::path& path);

}  // namespace jssp
