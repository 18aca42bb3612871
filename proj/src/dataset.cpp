#include "jssp/dataset.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <iostream>
#include <map>
#include <optional>

#include "jssp/parallel.hpp"
#include "jssp/validator.hpp"

namespace jssp {

Json to_json(const DatasetRecord& r) {
  const std::string user = std::string(kPromptVariants.at(static_cast<std::size_t>(r.prompt_variant))) + "\n\n" +
                           r.problem_nl;
  Json j;
  j["id"] = r.id;
  j["num_jobs"] = r.num_jobs;
  j["num_machines"] = r.num_machines;
  j["matrix"] = r.matrix;
  j["problem_nl"] = r.problem_nl;
  j["solution_nl"] = r.solution_nl;
  j["makespan"] = r.makespan;
  j["proven_optimal"] = r.proven_optimal;
  j["style"] = std::string(to_string(r.style));
  j["prompt_variant"] = r.prompt_variant;
  j["seed"] = r.seed;
  j["messages"] = Json::array({{{"role", "system"}, {"content", std::string(kSystemPrompt)}},
                               {{"role", "user"}, {"content", user}},
                               {{"role", "assistant"}, {"content", r.solution_nl}}});
  return j;
}

DatasetRecord record_from_json(const Json& j) {
  try {
    DatasetRecord r;
    r.id = j.at("id").get<std::string>();
    r.num_jobs = j.at("num_jobs").get<int>();
    r.num_machines = j.at("num_machines").get<int>();
    r.matrix = j.at("matrix").get<std::string>();
    r.problem_nl = j.at("problem_nl").get<std::string>();
    r.solution_nl = j.at("solution_nl").get<std::string>();
    r.makespan = j.at("makespan").get<double>();
    r.proven_optimal = j.value("proven_optimal", false);
    r.style = parse_style(j.value("style", std::string("MachineCentric")));
    r.prompt_variant = j.value("prompt_variant", 0);
    r.seed = j.value("seed", std::uint64_t{0});
    return r;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::BadRecord, e.what());
  }
}

void check_record(const DatasetRecord& r) {
  const auto doc = parse_matrix(r.matrix);
  const auto from_text = parse_problem_nl(r.problem_nl);
  if (!(doc.instance == from_text)) throw Error(ErrorCode::BadRecord, r.id + ": matrix and problem text differ");
  if (doc.instance.num_jobs() != r.num_jobs || doc.instance.num_machines() != r.num_machines) {
    throw Error(ErrorCode::BadRecord, r.id + ": size fields disagree with the matrix");
  }
  const auto report = validate_text(doc.instance, r.solution_nl);
  if (!report.clean()) throw Error(ErrorCode::BadRecord, r.id + ": solution does not validate");
  if (!report.computed_makespan || static_cast<double>(*report.computed_makespan) != r.makespan) {
    throw Error(ErrorCode::BadRecord, r.id + ": makespan differs from the solution");
  }
}

DatasetRecord ingest_record(const Json& j, const std::string& fallback_id) {
  auto text_field = [&](std::initializer_list<const char*> names) -> std::optional<std::string> {
    for (const char* n : names) {
      if (j.contains(n) && j[n].is_string()) return j[n].get<std::string>();
    }
    return std::nullopt;
  };
  DatasetRecord r;
  r.id = j.contains("id") && j["id"].is_string() ? j["id"].get<std::string>() : fallback_id;

  std::optional<JsspInstance> instance;
  if (auto m = text_field({"matrix"})) instance = parse_matrix(*m).instance;
  const auto problem = text_field({"problem_nl", "input", "prompt_machines_first", "prompt_jobs_first"});
  if (!instance && problem) instance = parse_problem_nl(*problem);
  if (!instance) throw Error(ErrorCode::BadRecord, r.id + ": no matrix or problem text");

  const auto solution = text_field({"solution_nl", "output"});
  if (!solution) throw Error(ErrorCode::BadRecord, r.id + ": no solution text");
  const auto report = validate_text(*instance, *solution);
  if (!report.feasible() || !report.computed_makespan) {
    throw Error(ErrorCode::BadRecord, r.id + ": solution is not feasible");
  }
  // Re-emit so the stored texts are canonical.
  const auto parsed = parse_solution_nl(*solution);
  const Schedule schedule(*instance, parsed.ops);

  r.style = NlStyle::MachineCentric;
  if (auto s = text_field({"style"})) {
    r.style = parse_style(*s);
  } else if (problem && problem->find("consists of the following Operations") != std::string::npos) {
    r.style = NlStyle::JobCentric;
  }
  r.num_jobs = instance->num_jobs();
  r.num_machines = instance->num_machines();
  r.makespan = static_cast<double>(schedule.makespan());
  r.matrix = emit_matrix(*instance, r.makespan);
  r.problem_nl = emit_problem_nl(*instance, r.style);
  r.solution_nl = emit_solution_nl(schedule, *instance);
  r.proven_optimal = j.value("proven_optimal", false);
  r.prompt_variant = j.value("prompt_variant", 0);
  return r;
}

namespace {

DatasetRecord label(const BatchItem& item, const DatasetConfig& config) {
  AnytimeOptions opts = config.solver;
  opts.seed = derive_seed(config.solver.seed, item.index);
  const auto t0 = std::chrono::steady_clock::now();
  SolveResult result = solve_anytime(item.instance, opts);
  if (!result.proven_optimal && config.proof_node_limit > 0) {
    const Seconds used = std::chrono::steady_clock::now() - t0;
    ExactOptions exact;
    exact.node_limit = config.proof_node_limit;
    exact.time_limit = std::max(Seconds{0}, config.solver.time_limit - used);
    exact.incumbent = result.schedule;
    SolveResult proof = solve_exact(item.instance, exact);
    if (proof.proven_optimal || proof.schedule.makespan() < result.schedule.makespan()) result = std::move(proof);
  }

  std::mt19937_64 rng(splitmix64(item.seed));
  const auto chat = build_chat_record(item.instance, result.schedule, config.style, std::nullopt, rng);

  DatasetRecord r;
  char id[64];
  std::snprintf(id, sizeof id, "jssp-%s-%06llu", format_size(item.size).c_str(),
                static_cast<unsigned long long>(item.index));
  r.id = id;
  r.num_jobs = item.instance.num_jobs();
  r.num_machines = item.instance.num_machines();
  r.makespan = static_cast<double>(result.schedule.makespan());
  r.matrix = emit_matrix(item.instance, r.makespan);
  r.problem_nl = emit_problem_nl(item.instance, config.style);
  r.solution_nl = chat.assistant;
  r.proven_optimal = result.proven_optimal;
  r.style = config.style;
  r.prompt_variant = chat.metadata.prompt_variant;
  r.seed = item.seed;
  return r;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

DatasetSummary build_dataset(const DatasetConfig& config) {
  const auto items = generate_batch(config.generation, config.workers);
  std::vector<std::optional<DatasetRecord>> labelled(items.size());
  std::vector<std::string> errors(items.size());
  parallel_for(items.size(), config.workers, [&](std::size_t i) {
    try {
      DatasetRecord r = label(items[i], config);
      check_record(r);
      labelled[i] = std::move(r);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  DatasetSummary summary;
  std::vector<DatasetRecord> records;
  std::map<std::string, std::size_t> per_size;
  std::size_t proven = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!labelled[i]) {
      std::cerr << "skipping instance " << items[i].index << ": " << errors[i] << "\n";
      summary.skipped.emplace_back(items[i].index, errors[i]);
      continue;
    }
    ++per_size[format_size(items[i].size)];
    if (labelled[i]->proven_optimal) ++proven;
    records.push_back(std::move(*labelled[i]));
  }
  const std::size_t n_val = std::min(config.validation_count, records.size());
  const auto split = records.end() - static_cast<std::ptrdiff_t>(n_val);
  summary.train.assign(records.begin(), split);
  summary.validation.assign(split, records.end());

  const auto& gen = config.generation;
  Json sizes = Json::array();
  for (const auto& s : gen.sizes) sizes.push_back(format_size(s));
  Json tallies = Json::object();
  for (const auto& s : gen.sizes) tallies[format_size(s)] = per_size[format_size(s)];
  Json skipped = Json::array();
  for (const auto& [index, reason] : summary.skipped) skipped.push_back({{"index", index}, {"reason", reason}});

  Json& m = summary.manifest;
  m["master_seed"] = gen.master_seed;
  m["solver_seed"] = config.solver.seed;
  m["sizes"] = std::move(sizes);
  m["count_per_size"] = gen.count_per_size;
  m["dur_min"] = gen.dur_min;
  m["dur_max"] = gen.dur_max;
  m["style"] = std::string(to_string(config.style));
  m["solver"] = {{"time_limit_seconds", config.solver.time_limit.count()},
                 {"max_iterations", config.solver.max_iterations},
                 {"stall_iterations", config.solver.stall_iterations},
                 {"proof_node_limit", config.proof_node_limit}};
  m["records"] = records.size();
  m["train"] = summary.train.size();
  m["validation"] = summary.validation.size();
  m["proven_optimal"] = proven;
  m["per_size"] = std::move(tallies);
  m["skipped"] = std::move(skipped);
  m["created_at"] = utc_timestamp();
  return summary;
}

std::string to_jsonl(const std::vector<DatasetRecord>& records) {
  std::string out;
  for (const auto& r : records) out += to_json(r).dump() + "\n";
  return out;
}

DatasetSummary write_dataset(const DatasetConfig& config, const std::filesystem::path& out_dir) {
  auto summary = build_dataset(config);
  write_file(out_dir / "train.jsonl", to_jsonl(summary.train));
  write_file(out_dir / "validation.jsonl", to_jsonl(summary.validation));
  write_file(out_dir / "manifest.json", summary.manifest.dump(2) + "\n");
  return summary;
}

}  // namespace jssp
