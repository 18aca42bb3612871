// jsspkit: instance generation, labeling, validation and evaluation.
//
// Exit status: 0 success, 1 operational error (or infeasible for `validate`),
// 2 usage error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "jssp/dataset.hpp"
#include "jssp/eval_runner.hpp"
#include "jssp/evalkit.hpp"
#include "jssp/instgen.hpp"
#include "jssp/json_io.hpp"
#include "jssp/nlcodec.hpp"
#include "jssp/solver.hpp"
#include "jssp/validator.hpp"

namespace fs = std::filesystem;
using namespace jssp;

namespace {

struct GenArgs {
  std::string sizes;
  int count = 1;
  int dur_min = 1;
  int dur_max = 99;
  std::uint64_t seed = 0;
  std::string out;
};

struct SolveArgs {
  std::string instance;
  double time_limit = 300;
  std::uint64_t seed = 0;
  bool exact = false;
  std::uint64_t node_limit = 200'000'000;
  std::string out;
  std::string solution_out;
};

struct DatasetArgs {
  std::string sizes;
  int count = 1;
  int dur_min = 5;
  int dur_max = 500;
  std::uint64_t seed = 0;
  double time_limit = 300;
  std::string style = "machine";
  std::size_t validation = 0;
  int workers = 0;
  std::uint64_t proof_nodes = 2'000'000;
  std::string out;
};

struct EvalArgs {
  std::string instances;
  std::string references;
  std::string endpoint;
  std::string model;
  std::string replay;
  std::string record;
  std::string out;
  std::string style = "machine";
  SamplingParams params;
  int workers = 1;
  int retries = 4;
  std::optional<double> penalty_gap;
};

void print_or_write(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
  } else {
    write_file(out, text);
  }
}

int cmd_gen(const GenArgs& a) {
  BatchSpec spec{parse_sizes(a.sizes), a.count, a.dur_min, a.dur_max, a.seed};
  const auto items = generate_batch(spec);
  for (const auto& item : items) {
    char name[96];
    std::snprintf(name, sizeof name, "jssp-%s-%06llu.jssp", format_size(item.size).c_str(),
                  static_cast<unsigned long long>(item.index));
    write_file(fs::path(a.out) / name, emit_matrix(item.instance));
  }
  std::cout << "wrote " << items.size() << " instances to " << a.out << "\n";
  return 0;
}

int cmd_solve(const SolveArgs& a) {
  const auto doc = parse_matrix(read_file(a.instance));
  SolveResult result;
  if (a.exact) {
    ExactOptions o;
    o.time_limit = Seconds{a.time_limit};
    o.node_limit = a.node_limit;
    result = solve_exact(doc.instance, o);
  } else {
    AnytimeOptions o;
    o.time_limit = Seconds{a.time_limit};
    o.seed = a.seed;
    result = solve_anytime(doc.instance, o);
  }
  auto j = to_json(result);
  const auto solution = emit_solution_nl(result.schedule, doc.instance);
  j["solution_nl"] = solution;
  print_or_write(j.dump(2) + "\n", a.out);
  if (!a.solution_out.empty()) write_file(a.solution_out, solution);
  return 0;
}

int cmd_build_dataset(const DatasetArgs& a) {
  DatasetConfig cfg;
  cfg.generation = BatchSpec{parse_sizes(a.sizes), a.count, a.dur_min, a.dur_max, a.seed};
  cfg.solver.time_limit = Seconds{a.time_limit};
  cfg.solver.seed = a.seed;
  cfg.proof_node_limit = a.proof_nodes;
  cfg.style = parse_style(a.style);
  cfg.validation_count = a.validation;
  cfg.workers = a.workers;
  const auto summary = write_dataset(cfg, a.out);
  std::cout << "train " << summary.train.size() << ", validation " << summary.validation.size() << ", skipped "
            << summary.skipped.size() << " -> " << a.out << "\n";
  return 0;
}

int cmd_validate(const std::string& instance_path, const std::string& solution_path, const std::string& out) {
  const auto doc = parse_matrix(read_file(instance_path));
  const auto report = validate_text(doc.instance, read_file(solution_path));
  print_or_write(to_json(report).dump(2) + "\n", out);
  return report.feasible() ? 0 : 1;
}

std::unique_ptr<ChatTransport> make_transport(const EvalArgs& a) {
  if (!a.replay.empty()) return std::make_unique<ReplayTransport>(ReplayTransport::from_file(a.replay));
  EndpointConfig cfg;
  if (fs::is_regular_file(a.endpoint)) {
    cfg = EndpointConfig::from_file(a.endpoint);
  } else {
    cfg.url = a.endpoint;
  }
  if (!a.model.empty()) cfg.model = a.model;
  return std::make_unique<HttpTransport>(cfg);
}

RunConfig make_run_config(const EvalArgs& a) {
  RunConfig cfg;
  cfg.params = a.params;
  cfg.model = a.model;
  cfg.style = parse_style(a.style);
  cfg.workers = a.workers;
  cfg.retry.max_attempts = a.retries;
  cfg.eval.infeasible_penalty_gap = a.penalty_gap;
  return cfg;
}

std::vector<EvalInstance> load_eval_instances(const EvalArgs& a) {
  auto instances = load_instances(a.instances);
  if (!a.references.empty()) apply_references(instances, a.references);
  return instances;
}

int cmd_eval(const EvalArgs& a) {
  const auto instances = load_eval_instances(a);
  auto transport = make_transport(a);
  CandidateLog log;
  const auto report = run_eval(instances, *transport, make_run_config(a), a.record.empty() ? nullptr : &log);
  if (!a.record.empty()) write_file(a.record, to_replay_jsonl(log));
  if (!a.out.empty()) write_report(report, a.out);
  std::cout << render_report_text(report);
  return 0;
}

int cmd_grid(const EvalArgs& a) {
  const auto instances = load_eval_instances(a);
  auto transport = make_transport(a);
  const auto grid = grid_search(instances, *transport, make_run_config(a));
  Json out = Json::array();
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    const auto& p = grid.points[i];
    std::cout << "top_k=" << p.params.top_k << " temperature=" << p.params.temperature << " top_p=" << p.params.top_p
              << " mean_gap=" << (p.report.gaps ? std::to_string(p.report.gaps->mean) : "n/a")
              << " feasible=" << p.report.feasibility_rate << (grid.best == i ? "  <- best" : "") << "\n";
    out.push_back({{"top_k", p.params.top_k},
                   {"temperature", p.params.temperature},
                   {"top_p", p.params.top_p},
                   {"report", to_json(p.report)},
                   {"best", grid.best == i}});
  }
  if (!a.out.empty()) write_file(a.out, out.dump(2) + "\n");
  return 0;
}

int cmd_stats(const std::string& path, bool as_json) {
  std::istringstream in(read_file(path));
  std::vector<double> values;
  std::string token;
  while (in >> token) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::BadRecord, "not a number: '" + token + "'");
    }
  }
  const auto stats = summarize_gaps(values);
  std::cout << (as_json ? to_json(stats).dump(2) + "\n" : render_gap_table(stats));
  return 0;
}

int cmd_ingest(const std::string& in, const std::string& out) {
  std::vector<DatasetRecord> records;
  std::size_t line = 0;
  std::size_t rejected = 0;
  for (const auto& j : read_jsonl(in)) {
    try {
      records.push_back(ingest_record(j, "ingest-" + std::to_string(line)));
    } catch (const Error& e) {
      std::cerr << "skipping record " << line << ": " << e.what() << "\n";
      ++rejected;
    }
    ++line;
  }
  print_or_write(to_jsonl(records), out);
  std::cerr << "ingested " << records.size() << ", rejected " << rejected << "\n";
  return 0;
}

void add_sampling_options(CLI::App* cmd, EvalArgs& a) {
  cmd->add_option("instances", a.instances, "JSONL with id + matrix per line")->required();
  cmd->add_option("--references", a.references, "JSONL of {id, makespan, proven_optimal}");
  auto* ep = cmd->add_option("--endpoint", a.endpoint, "Chat-completion URL or endpoint config JSON");
  auto* rp = cmd->add_option("--replay", a.replay, "JSONL of recorded {id, candidates}");
  ep->excludes(rp);
  cmd->add_option("--model", a.model, "Model name sent with each request");
  cmd->add_option("--n", a.params.n, "Samples per instance")->capture_default_str();
  cmd->add_option("--temperature", a.params.temperature)->capture_default_str();
  cmd->add_option("--top-k", a.params.top_k)->capture_default_str();
  cmd->add_option("--top-p", a.params.top_p)->capture_default_str();
  cmd->add_option("--style", a.style, "Problem text style: job|machine")->capture_default_str();
  cmd->add_option("--workers", a.workers, "Requests in flight")->capture_default_str();
  cmd->add_option("--retries", a.retries, "Attempts per request")->capture_default_str();
  cmd->add_option("--penalty-gap", a.penalty_gap, "Gap assigned to instances with no feasible candidate");
  cmd->add_option("--record", a.record, "Write candidates as a replay file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Job-shop instance generation, labeling, LLM output validation and evaluation"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate random instances as .jssp matrix files");
  gen_cmd->add_option("--sizes", gen.sizes, "Comma-separated JxM sizes, e.g. 3x3,10x5")->required();
  gen_cmd->add_option("--count", gen.count, "Instances per size")->capture_default_str();
  gen_cmd->add_option("--dur-min", gen.dur_min)->capture_default_str();
  gen_cmd->add_option("--dur-max", gen.dur_max)->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed)->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve a .jssp instance and print the result as JSON");
  solve_cmd->add_option("instance", solve.instance)->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--time-limit", solve.time_limit, "Seconds")->capture_default_str();
  solve_cmd->add_option("--seed", solve.seed)->capture_default_str();
  solve_cmd->add_flag("--exact", solve.exact, "Branch and bound instead of annealing");
  solve_cmd->add_option("--node-limit", solve.node_limit)->capture_default_str();
  solve_cmd->add_option("--out", solve.out, "Write JSON here instead of stdout");
  solve_cmd->add_option("--solution-out", solve.solution_out, "Also write the solution text here");

  DatasetArgs ds;
  auto* ds_cmd = app.add_subcommand("build-dataset", "Generate, label and write a JSONL dataset");
  ds_cmd->add_option("--sizes", ds.sizes)->required();
  ds_cmd->add_option("--count", ds.count, "Instances per size")->capture_default_str();
  ds_cmd->add_option("--dur-min", ds.dur_min)->capture_default_str();
  ds_cmd->add_option("--dur-max", ds.dur_max)->capture_default_str();
  ds_cmd->add_option("--seed", ds.seed)->capture_default_str();
  ds_cmd->add_option("--time-limit", ds.time_limit, "Solver seconds per instance")->capture_default_str();
  ds_cmd->add_option("--style", ds.style, "job|machine")->capture_default_str();
  ds_cmd->add_option("--validation", ds.validation, "Trailing records for validation.jsonl")->capture_default_str();
  ds_cmd->add_option("--workers", ds.workers, "0 = all cores")->capture_default_str();
  ds_cmd->add_option("--proof-nodes", ds.proof_nodes, "Branch-and-bound nodes for optimality proofs, 0 = off")
      ->capture_default_str();
  ds_cmd->add_option("--out", ds.out, "Output directory")->required();

  std::string v_instance, v_solution, v_out;
  auto* val_cmd = app.add_subcommand("validate", "Check a solution text against an instance; exit 0 iff feasible");
  val_cmd->add_option("instance", v_instance)->required()->check(CLI::ExistingFile);
  val_cmd->add_option("solution", v_solution)->required()->check(CLI::ExistingFile);
  val_cmd->add_option("--out", v_out);

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "Best-of-N evaluation against reference makespans");
  add_sampling_options(eval_cmd, ev);
  eval_cmd->add_option("--out", ev.out, "Report prefix (writes .json and .txt)");

  EvalArgs grid;
  auto* grid_cmd = app.add_subcommand("grid", "Sweep top_k x temperature x top_p, pick the lowest mean gap");
  add_sampling_options(grid_cmd, grid);
  grid_cmd->add_option("--out", grid.out, "Write all grid reports as JSON");

  std::string stats_path;
  bool stats_json = false;
  auto* stats_cmd = app.add_subcommand("stats", "Descriptive statistics of a whitespace-separated numbers file");
  stats_cmd->add_option("numbers", stats_path)->required()->check(CLI::ExistingFile);
  stats_cmd->add_flag("--json", stats_json);

  std::string ingest_in, ingest_out;
  auto* ingest_cmd = app.add_subcommand("ingest", "Normalize externally produced JSONL examples into dataset records");
  ingest_cmd->add_option("input", ingest_in)->required()->check(CLI::ExistingFile);
  ingest_cmd->add_option("--out", ingest_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen);
    if (*solve_cmd) return cmd_solve(solve);
    if (*ds_cmd) return cmd_build_dataset(ds);
    if (*val_cmd) return cmd_validate(v_instance, v_solution, v_out);
    if (*eval_cmd || *grid_cmd) {
      auto& a = *eval_cmd ? ev : grid;
      if (a.endpoint.empty() && a.replay.empty()) {
        std::cerr << "one of --endpoint or --replay is required\n\n" << (*eval_cmd ? eval_cmd : grid_cmd)->help();
        return 2;
      }
      return *eval_cmd ? cmd_eval(a) : cmd_grid(a);
    }
    if (*stats_cmd) return cmd_stats(stats_path, stats_json);
    if (*ingest_cmd) return cmd_ingest(ingest_in, ingest_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
