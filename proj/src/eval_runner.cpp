#include "jssp/eval_runner.hpp"

#include "jssp/parallel.hpp"

namespace jssp {

std::vector<EvalInstance> load_instances(const std::filesystem::path& path) {
  std::vector<EvalInstance> out;
  for (const auto& j : read_jsonl(path)) {
    if (!j.contains("id") || !j.contains("matrix")) {
      throw Error(ErrorCode::BadRecord, path.string() + ": instance lines need \"id\" and \"matrix\"");
    }
    auto doc = parse_matrix(j["matrix"].get<std::string>());
    EvalInstance item{j["id"].get<std::string>(), std::move(doc.instance), doc.makespan, false};
    if (j.contains("makespan") && j["makespan"].is_number()) item.reference = j["makespan"].get<double>();
    item.reference_proven_optimal = j.value("proven_optimal", false);
    out.push_back(std::move(item));
  }
  return out;
}

void apply_references(std::vector<EvalInstance>& instances, const std::filesystem::path& path) {
  std::map<std::string, std::pair<double, bool>> refs;
  for (const auto& j : read_jsonl(path)) {
    try {
      refs[j.at("id").get<std::string>()] = {j.at("makespan").get<double>(), j.value("proven_optimal", false)};
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::BadRecord, path.string() + ": " + e.what());
    }
  }
  for (auto& item : instances) {
    if (auto it = refs.find(item.id); it != refs.end()) {
      item.reference = it->second.first;
      item.reference_proven_optimal = it->second.second;
    }
  }
}

CompletionRequest make_eval_request(const EvalInstance& item, const RunConfig& config) {
  CompletionRequest req;
  req.id = item.id;
  req.model = config.model;
  req.params = config.params;
  req.messages = {{"system", std::string(kSystemPrompt)},
                  {"user", build_user_prompt(item.instance, config.style, kEvalPromptVariant)}};
  return req;
}

EvalReport run_eval(const std::vector<EvalInstance>& instances, ChatTransport& transport, const RunConfig& config,
                    CandidateLog* log) {
  config.params.validate();
  std::vector<std::size_t> runnable;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (instances[i].reference) runnable.push_back(i);
  }
  std::vector<EvalOutcome> outcomes(runnable.size());
  std::vector<std::vector<std::string>> texts(runnable.size());
  parallel_for(runnable.size(), config.workers, [&](std::size_t r) {
    const auto& item = instances[runnable[r]];
    texts[r] = llm_complete(transport, make_eval_request(item, config), config.retry);
    const auto sel = select_best(item.instance, texts[r]);
    outcomes[r] = make_outcome(item.id, sel, *item.reference, item.reference_proven_optimal);
  });
  if (log) {
    for (std::size_t r = 0; r < runnable.size(); ++r) log->emplace_back(instances[runnable[r]].id, texts[r]);
  }
  if (outcomes.empty()) throw Error(ErrorCode::EmptyInput, "no instance has a reference makespan");
  EvalReport report = evaluate_run(outcomes, config.eval);
  report.skipped = instances.size() - runnable.size();
  return report;
}

std::string to_replay_jsonl(const CandidateLog& log) {
  std::string out;
  for (const auto& [id, candidates] : log) out += Json{{"id", id}, {"candidates", candidates}}.dump() + "\n";
  return out;
}

void write_report(const EvalReport& report, const std::filesystem::path& prefix) {
  write_file(prefix.string() + ".json", to_json(report).dump(2) + "\n");
  write_file(prefix.string() + ".txt", render_report_text(report));
}

GridResult grid_search(const std::vector<EvalInstance>& instances, ChatTransport& transport, const RunConfig& base,
                       const std::vector<int>& top_k, const std::vector<double>& temperature,
                       const std::vector<double>& top_p) {
  GridResult result;
  for (int k : top_k) {
    for (double t : temperature) {
      for (double p : top_p) {
        RunConfig cfg = base;
        cfg.params.top_k = k;
        cfg.params.temperature = t;
        cfg.params.top_p = p;
        result.points.push_back({cfg.params, run_eval(instances, transport, cfg)});
        const auto& rep = result.points.back().report;
        if (!rep.gaps) continue;
        const bool better = !result.best || rep.gaps->mean < result.points[*result.best].report.gaps->mean;
        if (better) result.best = result.points.size() - 1;
      }
    }
  }
  return result;
}

}  // namespace jssp
