#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <thread>

#include <httplib.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include "jssp/dataset.hpp"
#include "jssp/eval_runner.hpp"
#include "jssp/validator.hpp"
#include "support.hpp"

using namespace jssp;

namespace {

DatasetConfig small_config(std::size_t count, std::size_t validation) {
  DatasetConfig c;
  c.generation.sizes = {{2, 2}, {3, 3}};
  c.generation.count_per_size = count;
  c.generation.dur_min = 5;
  c.generation.dur_max = 500;
  c.generation.master_seed = 2024;
  c.solver.time_limit = Seconds(10);
  c.solver.stall_iterations = 2000;
  c.solver.seed = 7;
  c.validation_count = validation;
  c.workers = 1;
  return c;
}

RetryPolicy instant_retry(std::vector<std::chrono::milliseconds>* sleeps = nullptr) {
  RetryPolicy r;
  r.sleep = [sleeps](std::chrono::milliseconds d) {
    if (sleeps) sleeps->push_back(d);
  };
  return r;
}

CompletionRequest example_request(int n) {
  CompletionRequest req;
  req.id = "example";
  req.messages = {{"system", std::string(kSystemPrompt)}, {"user", "hi"}};
  req.params.n = n;
  return req;
}

/// A loopback port that was free a moment ago and has no listener.
int closed_port() {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = 0;
  ::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr);
  socklen_t len = sizeof addr;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  ::close(fd);
  return ntohs(addr.sin_port);
}

std::vector<EvalInstance> example_instances() {
  return {EvalInstance{"example", test::example3x3(), 488.0, true}};
}

}  // namespace

TEST_CASE("dataset records are self-consistent") {
  const auto summary = build_dataset(small_config(3, 2));
  CHECK(summary.train.size() == 4);
  CHECK(summary.validation.size() == 2);
  CHECK(summary.skipped.empty());
  CHECK(summary.manifest["records"] == 6);
  CHECK(summary.manifest["per_size"]["3x3"] == 3);
  CHECK(summary.train.front().id == "jssp-2x2-000000");

  auto all = summary.train;
  all.insert(all.end(), summary.validation.begin(), summary.validation.end());
  for (const auto& r : all) {
    const auto doc = parse_matrix(r.matrix);
    CHECK(parse_problem_nl(r.problem_nl) == doc.instance);
    CHECK(doc.makespan == r.makespan);
    const auto rep = validate_text(doc.instance, r.solution_nl);
    CHECK(rep.clean());
    CHECK(rep.computed_makespan == static_cast<Time>(r.makespan));
    CHECK(r.problem_nl.find(" Machine 0 is used for the following Operations:") != std::string::npos);
    CHECK(r.makespan >= static_cast<double>(trivial_lower_bound(doc.instance)));
    CHECK_NOTHROW(check_record(r));
    CHECK(record_from_json(to_json(r)) == r);
    const auto j = to_json(r);
    REQUIRE(j["messages"].size() == 3);
    CHECK(j["messages"][2]["content"] == r.solution_nl);
    CHECK(j["messages"][1]["content"].get<std::string>().find(r.problem_nl) != std::string::npos);
  }
  // Small instances are proven optimal by the follow-up search.
  CHECK(summary.manifest["proven_optimal"] == 6);
}

TEST_CASE("dataset generation is reproducible") {
  const auto a = build_dataset(small_config(2, 1));
  const auto b = build_dataset(small_config(2, 1));
  CHECK(to_jsonl(a.train) == to_jsonl(b.train));
  CHECK(to_jsonl(a.validation) == to_jsonl(b.validation));
}

TEST_CASE("check_record rejects tampered records") {
  auto r = build_dataset(small_config(1, 0)).train.front();
  auto bad = r;
  bad.makespan += 1;
  CHECK_THROWS_AS(check_record(bad), Error);
  bad = r;
  bad.solution_nl = "nothing";
  CHECK_THROWS_AS(check_record(bad), Error);
  bad = r;
  bad.problem_nl = emit_problem_nl(JsspInstance(1, 1, {{{0, 3}}}), NlStyle::JobCentric);
  CHECK_THROWS_AS(check_record(bad), Error);
}

TEST_CASE("ingest accepts input/output text pairs") {
  const auto inst = test::example3x3();
  Json j{{"input", "Instruct: solve\n\n" + emit_problem_nl(inst, NlStyle::JobCentric)},
         {"output", test::read_fixture("example3x3_solution.txt")}};
  const auto r = ingest_record(j, "ext-1");
  CHECK(r.id == "ext-1");
  CHECK(r.makespan == 488.0);
  CHECK(parse_matrix(r.matrix).instance == inst);
  CHECK_NOTHROW(check_record(r));
  CHECK_THROWS_AS(ingest_record(Json{{"input", "x"}}, "y"), Error);
}

TEST_CASE("llm_complete returns n candidates and sends the sampling parameters") {
  std::string seen;
  FunctionTransport t([&](const CompletionRequest&, const std::string& body) {
    seen = body;
    return TransportResponse{200, completion_response_body(std::vector<std::string>(10, "text"))};
  });
  const auto out = llm_complete(t, example_request(10), instant_retry());
  CHECK(out.size() == 10);
  const auto j = Json::parse(seen);
  CHECK(j["n"] == 10);
  CHECK(j["top_k"] == 50);
  CHECK(j["top_p"].get<double>() == 0.95);
  CHECK(j["temperature"].get<double>() == 1.0);
  CHECK(j["messages"][0]["content"] == "You are an expert in Job Shop Scheduling Problem");
}

TEST_CASE("llm_complete retries transient failures with growing backoff") {
  int calls = 0;
  FunctionTransport t([&](const CompletionRequest&, const std::string&) {
    ++calls;
    if (calls == 1) throw TransportFailure("connection reset");
    if (calls == 2) return TransportResponse{503, "busy"};
    if (calls == 3) return TransportResponse{429, "slow down"};
    return TransportResponse{200, completion_response_body({"a", "b"})};
  });
  std::vector<std::chrono::milliseconds> sleeps;
  CHECK(llm_complete(t, example_request(2), instant_retry(&sleeps)).size() == 2);
  CHECK(calls == 4);
  REQUIRE(sleeps.size() == 3);
  CHECK(sleeps[0].count() == 250);
  CHECK(sleeps[1].count() == 500);
  CHECK(sleeps[2].count() == 1000);
}

TEST_CASE("llm_complete error classes") {
  int calls = 0;
  FunctionTransport bad_request([&](const CompletionRequest&, const std::string&) {
    ++calls;
    return TransportResponse{400, "bad"};
  });
  try {
    llm_complete(bad_request, example_request(2), instant_retry());
    FAIL("expected ApiError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ApiError);
  }
  CHECK(calls == 1);

  FunctionTransport short_answer([](const CompletionRequest&, const std::string&) {
    return TransportResponse{200, completion_response_body({"only one"})};
  });
  CHECK_THROWS_AS(llm_complete(short_answer, example_request(2), instant_retry()), Error);

  FunctionTransport down([](const CompletionRequest&, const std::string&) -> TransportResponse {
    throw TransportFailure("refused");
  });
  try {
    llm_complete(down, example_request(2), instant_retry());
    FAIL("expected EndpointUnavailable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EndpointUnavailable);
  }

  CompletionRequest invalid = example_request(0);
  CHECK_THROWS_AS(llm_complete(short_answer, invalid, instant_retry()), Error);
}

TEST_CASE("http transport against an unreachable port") {
  const int port = closed_port();
  EndpointConfig cfg;
  cfg.url = "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
  cfg.connect_timeout = std::chrono::milliseconds(500);
  cfg.read_timeout = std::chrono::milliseconds(2000);
  HttpTransport t(cfg);
  RetryPolicy retry = instant_retry();
  retry.max_attempts = 2;
  try {
    llm_complete(t, example_request(1), retry);
    FAIL("expected EndpointUnavailable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EndpointUnavailable);
  }
}

TEST_CASE("http transport against a local server") {
  httplib::Server server;
  std::string auth;
  std::string path;
  server.Post(R"(/v1/.*)", [&](const httplib::Request& req, httplib::Response& res) {
    auth = req.get_header_value("Authorization");
    path = req.path;
    const auto j = Json::parse(req.body);
    res.set_content(completion_response_body(std::vector<std::string>(j["n"].get<std::size_t>(), "ok")),
                    "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  ::setenv("JSSP_TEST_TOKEN", "secret-token", 1);
  EndpointConfig cfg;
  cfg.url = "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
  cfg.api_key_env = "JSSP_TEST_TOKEN";
  HttpTransport t(cfg);
  const auto out = llm_complete(t, example_request(3), instant_retry());
  server.stop();
  th.join();
  ::unsetenv("JSSP_TEST_TOKEN");

  CHECK(out == std::vector<std::string>(3, "ok"));
  CHECK(auth == "Bearer secret-token");
  CHECK(path == "/v1/chat/completions");
}

TEST_CASE("run_eval with replayed candidates") {
  const auto good = test::read_fixture("example3x3_solution.txt");
  RunConfig cfg;
  cfg.params.n = 3;
  cfg.retry = instant_retry();

  ReplayTransport replay({{"example", {"junk", good, "more junk"}}});
  CandidateLog log;
  const auto r = run_eval(example_instances(), replay, cfg, &log);
  CHECK(r.feasibility_rate == 1.0);
  REQUIRE(r.gaps);
  CHECK(r.gaps->mean == 0.0);
  REQUIRE(log.size() == 1);
  CHECK(log[0].second.size() == 3);

  ReplayTransport garbage({{"example", {"a", "b", "c"}}});
  const auto g = run_eval(example_instances(), garbage, cfg);
  CHECK(g.feasibility_rate == 0.0);
  CHECK_FALSE(g.gaps);

  auto skipped = example_instances();
  skipped.push_back(EvalInstance{"noref", test::two_by_two(), std::nullopt, false});
  CHECK(run_eval(skipped, replay, cfg).skipped == 1);
  skipped.erase(skipped.begin());
  CHECK_THROWS_AS(run_eval(skipped, replay, cfg), Error);
}

TEST_CASE("run_eval sends the Machine-Centric instruct prompt") {
  std::string user;
  FunctionTransport t([&](const CompletionRequest& req, const std::string&) {
    user = req.messages.at(1).content;
    return TransportResponse{200, completion_response_body({test::read_fixture("example3x3_solution.txt")})};
  });
  RunConfig cfg;
  cfg.params.n = 1;
  run_eval(example_instances(), t, cfg);
  CHECK(user == std::string(kPromptVariants[kEvalPromptVariant]) + "\n\n" +
                    test::read_fixture("example3x3_machine_centric.txt"));
}

TEST_CASE("replaying a recorded run reproduces the report") {
  const auto dir = std::filesystem::temp_directory_path() / "jssp_replay_test";
  std::filesystem::remove_all(dir);
  const auto good = test::read_fixture("example3x3_solution.txt");
  RunConfig cfg;
  cfg.params.n = 2;
  cfg.retry = instant_retry();

  FunctionTransport live([&](const CompletionRequest&, const std::string&) {
    return TransportResponse{200, completion_response_body({good, "junk"})};
  });
  CandidateLog log;
  const auto first = run_eval(example_instances(), live, cfg, &log);
  write_file(dir / "replay.jsonl", to_replay_jsonl(log));
  write_report(first, dir / "first");

  auto replay = ReplayTransport::from_file(dir / "replay.jsonl");
  const auto second = run_eval(example_instances(), replay, cfg);
  write_report(second, dir / "second");
  CHECK(read_file(dir / "first.json") == read_file(dir / "second.json"));
  CHECK(read_file(dir / "first.txt") == read_file(dir / "second.txt"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("grid search picks the lowest mean gap") {
  const auto good = test::read_fixture("example3x3_solution.txt");
  std::string worse = good;
  // A feasible schedule with makespan 489: delay the last op on machine 1 by one.
  worse.replace(worse.find("267 + 221 -> 488"), 16, "268 + 221 -> 489");
  FunctionTransport t([&](const CompletionRequest& req, const std::string&) {
    const bool hot = req.params.temperature > 0.6;
    return TransportResponse{200, completion_response_body({hot ? worse : good})};
  });
  RunConfig cfg;
  cfg.params.n = 1;
  const auto g = grid_search(example_instances(), t, cfg, {10}, {1.0, 0.2}, {0.9});
  REQUIRE(g.points.size() == 2);
  REQUIRE(g.best);
  CHECK(g.points[*g.best].params.temperature == 0.2);
}
