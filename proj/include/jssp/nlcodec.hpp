#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "jssp/core.hpp"

namespace jssp {

enum class NlStyle { JobCentric, MachineCentric };

std::string_view to_string(NlStyle style);
/// Accepts "job", "machine", "JobCentric", "MachineCentric".
NlStyle parse_style(std::string_view text);

/// Makespan at the text boundary: one decimal, "55.0".
std::string format_makespan(double makespan);

// Matrix format: "N_J N_M" header, one "m d m d ..." row per job, optional
// trailing makespan row.

std::string emit_matrix(const JsspInstance& instance, std::optional<double> makespan = std::nullopt);

struct MatrixDocument {
  JsspInstance instance;
  std::optional<double> makespan;
};

MatrixDocument parse_matrix(std::string_view text);

std::string emit_problem_nl(const JsspInstance& instance, NlStyle style);

/// Either style; detected from the group header lines.
JsspInstance parse_problem_nl(std::string_view text);

/// Operation lines ordered by (start, machine), then the makespan sentence.
/// Throws CoverageError if the schedule does not match the instance.
std::string emit_solution_nl(const Schedule& schedule, const JsspInstance& instance);

/// The op-line body " Job j Operation k on Machine m : s + d -> e " without newline.
std::string format_solution_line(const ScheduledOp& op);

struct ParsedSolution {
  /// In the order found. end is the value written in the text.
  std::vector<ScheduledOp> ops;
  std::optional<double> claimed_makespan;
  /// Indices into ops whose written end differs from start + duration.
  std::vector<std::size_t> arithmetic_defects;
};

/// Extracts every "Job j Operation k on Machine m : s + d -> e" occurrence and
/// the first "Makespan: v". Never throws on prose; throws NoOperationsFound
/// when nothing op-shaped is present.
ParsedSolution parse_solution_nl(std::string_view text);

inline constexpr std::string_view kSystemPrompt = "You are an expert in Job Shop Scheduling Problem";

inline constexpr std::array<std::string_view, 3> kPromptVariants = {
    "Instruct: Provide a solution schedule for the JSSP problem below, also indicate the makespan.",
    "Task: Provide the steps of a solution for the JSSP problem and determine the makespan.",
    "Command: Give a detailed solution to tackle the JSSP problem, focusing on optimizing the makespan.",
};

/// Index of the fixed evaluation prompt in kPromptVariants.
inline constexpr int kEvalPromptVariant = 0;

struct ChatMetadata {
  std::string instance_id;
  int num_jobs = 0;
  int num_machines = 0;
  NlStyle style = NlStyle::MachineCentric;
  int prompt_variant = 0;
};

struct ChatRecord {
  std::string system;
  std::string user;
  std::string assistant;
  ChatMetadata metadata;
};

/// variant + "\n\n" + problem text.
std::string build_user_prompt(const JsspInstance& instance, NlStyle style, int prompt_variant);

/// With no prompt_variant, one is drawn uniformly from rng.
ChatRecord build_chat_record(const JsspInstance& instance, const Schedule& schedule, NlStyle style,
                             std::optional<int> prompt_variant, std::mt19937_64& rng,
                             std::string instance_id = {});

}  // namespace jssp
