#include <doctest.h>

#include "jssp/instgen.hpp"
#include "jssp/nlcodec.hpp"
#include "jssp/solver.hpp"
#include "support.hpp"

using namespace jssp;

namespace {

Schedule example_schedule() { return Schedule::from_starts(test::example3x3(), test::example3x3_starts()); }

template <class F>
ErrorCode error_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidSpec;
}

}  // namespace

TEST_CASE("matrix emission matches the fixtures") {
  CHECK(emit_matrix(test::ft06(), 55.0) == test::read_fixture("ft06.jssp"));
  CHECK(emit_matrix(JsspInstance(1, 1, {{{0, 7}}})) == "1 1\n0 7\n");
  const auto text = emit_matrix(test::example3x3(), 488.0);
  CHECK(text == test::read_fixture("example3x3.jssp"));
  CHECK(text.substr(text.size() - 6) == "488.0\n");
}

TEST_CASE("parse_matrix") {
  const auto doc = parse_matrix(test::read_fixture("ft06.jssp"));
  CHECK(doc.instance == test::ft06());
  REQUIRE(doc.makespan);
  CHECK(*doc.makespan == 55.0);

  const auto one = parse_matrix("1 1\n0 7\n");
  CHECK(one.instance == JsspInstance(1, 1, {{{0, 7}}}));
  CHECK_FALSE(one.makespan);

  // Flexible whitespace and an integer makespan.
  const auto loose = parse_matrix("  1   1  \r\n\n 0\t7 \n 7\n");
  CHECK(loose.instance == one.instance);
  CHECK(loose.makespan == 7.0);
  // Trailing spaces on the header line are tolerated.
  CHECK(parse_matrix("6 6        \n2 1 0 3 1 6 3 7 5 3 4 6\n1 8 2 5 4 10 5 10 0 10 3 4\n2 5 3 4 5 8 0 9 1 1 4 7\n"
                     "1 5 0 5 2 5 3 3 4 8 5 9\n2 9 1 3 4 5 5 4 0 3 3 1\n1 3 3 3 5 9 0 10 4 4 2 1\n55.0\n")
            .instance == test::ft06());
}

TEST_CASE("parse_matrix errors") {
  CHECK(error_code([] { parse_matrix(""); }) == ErrorCode::BadHeader);
  CHECK(error_code([] { parse_matrix("1\n0 7\n"); }) == ErrorCode::BadHeader);
  CHECK(error_code([] { parse_matrix("a b\n0 7\n"); }) == ErrorCode::BadHeader);
  CHECK(error_code([] { parse_matrix("1 1\n0 7 0\n"); }) == ErrorCode::BadJobRow);
  CHECK(error_code([] { parse_matrix("2 1\n0 7\n"); }) == ErrorCode::BadJobRow);
  CHECK(error_code([] { parse_matrix("1 1\n0 x\n"); }) == ErrorCode::BadJobRow);
  CHECK(error_code([] { parse_matrix("1 1\n1 7\n"); }) == ErrorCode::InvalidMachine);
  CHECK(error_code([] { parse_matrix("1 1\n0 7\n5 5\n"); }) == ErrorCode::BadJobRow);
}

TEST_CASE("problem text emission matches both style fixtures") {
  CHECK(emit_problem_nl(test::example3x3(), NlStyle::JobCentric) == test::read_fixture("example3x3_job_centric.txt"));
  CHECK(emit_problem_nl(test::example3x3(), NlStyle::MachineCentric) ==
        test::read_fixture("example3x3_machine_centric.txt"));

  const auto one = emit_problem_nl(JsspInstance(1, 1, {{{0, 7}}}), NlStyle::JobCentric);
  CHECK(one.find(" Job 0 consists of the following Operations:\n  Operation 0 on Machine 0 duration 7 mins.\n") !=
        std::string::npos);
  CHECK(one.find("Job 1") == std::string::npos);
}

TEST_CASE("machine-centric blocks list (op index, job id) ascending") {
  const auto text = emit_problem_nl(test::example3x3(), NlStyle::MachineCentric);
  const auto m0 = text.find(" Machine 0 is used");
  const auto a = text.find("Job 0 Operation 0", m0);
  const auto b = text.find("Job 2 Operation 0", m0);
  const auto c = text.find("Job 1 Operation 2", m0);
  CHECK(a < b);
  CHECK(b < c);
  CHECK(c < text.find(" Machine 1 is used"));
}

TEST_CASE("parse_problem_nl reads both fixtures") {
  CHECK(parse_problem_nl(test::read_fixture("example3x3_job_centric.txt")) == test::example3x3());
  CHECK(parse_problem_nl(test::read_fixture("example3x3_machine_centric.txt")) == test::example3x3());
  // Prompt prefix and loose whitespace.
  std::string text = "Instruct: do it\n\n" + test::read_fixture("example3x3_job_centric.txt");
  for (auto& ch : text) {
    if (ch == ' ') ch = '\t';
  }
  CHECK(parse_problem_nl(text) == test::example3x3());
}

TEST_CASE("parse_problem_nl errors") {
  CHECK(error_code([] { parse_problem_nl("Problem:\n Job 0 consists of the following Operations:\n"); }) ==
        ErrorCode::BadPreamble);
  const std::string pre = "Optimize schedule for 1 Jobs across 2 Machines to minimize makespan.\n\nProblem: \n\n";
  CHECK(error_code([&] {
          parse_problem_nl(pre + " Job 0 consists of the following Operations:\n  Operation 0 on Machine 0 duration 3 "
                                 "mins.\n  Operation 2 on Machine 1 duration 3 mins.\n");
        }) == ErrorCode::NonContiguousOps);
  CHECK(error_code([&] {
          parse_problem_nl(pre + " Machine 0 is used for the following Operations:\n  Job 0 Operation 0 duration 3 "
                                 "mins.\n\n\n Machine 1 is used for the following Operations:\n  Job 0 Operation 0 "
                                 "duration 3 mins.\n");
        }) == ErrorCode::DuplicateOp);
  CHECK(error_code([&] { parse_problem_nl(pre); }) == ErrorCode::NonContiguousOps);
  CHECK(error_code([&] {
          parse_problem_nl(pre + " Job 3 consists of the following Operations:\n  Operation 0 on Machine 0 duration 3 "
                                 "mins.\n");
        }) == ErrorCode::InvalidJob);
}

TEST_CASE("solution emission matches the fixture byte for byte") {
  CHECK(emit_solution_nl(example_schedule(), test::example3x3()) == test::read_fixture("example3x3_solution.txt"));

  const JsspInstance one(1, 1, {{{0, 7}}});
  CHECK(emit_solution_nl(Schedule::from_starts(one, {{0}}), one) ==
        "Solution:\n\n Job 0 Operation 0 on Machine 0 : 0 + 7 -> 7 \n\n"
        "Makespan:  7.0, as it is the maximum end completion time of Operation 0\n");
}

TEST_CASE("solution emission names the makespan operation latest in line order") {
  // Both jobs end at 5; lines sort by (start, machine), so job 1 on machine 1 comes last.
  const JsspInstance inst(2, 2, {{{0, 5}, {1, 1}}, {{1, 2}, {0, 1}}});
  const auto s = Schedule::from_starts(inst, {{0, 5}, {0, 5}});
  const auto text = emit_solution_nl(s, inst);
  CHECK(text.find("time of Operation 1\n") != std::string::npos);
}

TEST_CASE("solution emission rejects a schedule for another instance") {
  const auto s = Schedule::from_starts(test::two_by_two(), {{0, 3}, {0, 3}});
  CHECK(error_code([&] { emit_solution_nl(s, test::example3x3()); }) == ErrorCode::CoverageError);
}

TEST_CASE("parse_solution_nl") {
  const auto fixture = test::read_fixture("example3x3_solution.txt");
  const auto p = parse_solution_nl(fixture);
  REQUIRE(p.ops.size() == 9);
  REQUIRE(p.claimed_makespan);
  CHECK(*p.claimed_makespan == 488.0);
  CHECK(p.ops[0] == ScheduledOp::make(2, 0, 0, 0, 78));
  CHECK(p.ops[8] == ScheduledOp::make(0, 2, 2, 267, 213));
  CHECK(p.arithmetic_defects.empty());

  const auto chatty = parse_solution_nl(
      "Sure! Here is a schedule. Job shop problems are hard, Job 5 of mine took ages.\n\n" + fixture +
      "\nHope this helps.");
  CHECK(chatty.ops == p.ops);
  CHECK(chatty.claimed_makespan == p.claimed_makespan);

  const auto bad = parse_solution_nl("Job 0 Operation 0 on Machine 0 : 0 + 78 -> 90");
  REQUIRE(bad.ops.size() == 1);
  CHECK(bad.ops[0].end == 90);
  CHECK(bad.arithmetic_defects == std::vector<std::size_t>{0});
  CHECK_FALSE(bad.claimed_makespan);

  const auto squashed = parse_solution_nl("Job 1  Operation 2 on   Machine 0:230+213->443 Makespan: 443");
  REQUIRE(squashed.ops.size() == 1);
  CHECK(squashed.ops[0] == ScheduledOp::make(1, 2, 0, 230, 213));
  CHECK(squashed.claimed_makespan == 443.0);
}

TEST_CASE("parse_solution_nl distinguishes garbage from partial output") {
  CHECK(error_code([] { parse_solution_nl("I cannot solve this problem."); }) == ErrorCode::NoOperationsFound);
  CHECK(error_code([] { parse_solution_nl(""); }) == ErrorCode::NoOperationsFound);
  CHECK(error_code([] { parse_solution_nl("Job 1 Operation x on Machine 0 : 1 + 2 -> 3"); }) ==
        ErrorCode::NoOperationsFound);
  CHECK(error_code([] { parse_solution_nl("BigJob 1 Operation 1 on Machine 0 : 1 + 2 -> 3"); }) ==
        ErrorCode::NoOperationsFound);
  CHECK(parse_solution_nl("Job 0 Operation 0 on Machine 0 : 0 + 1 -> 1").ops.size() == 1);
}

TEST_CASE("parse_solution_nl is total over arbitrary bytes") {
  std::mt19937_64 rng(99);
  const std::string alphabet = "Job Operation on Machine : + -> 0123456789 Makespan\n\t.x";
  const auto fixture = test::read_fixture("example3x3_solution.txt");
  for (int i = 0; i < 2000; ++i) {
    std::string text;
    const int len = uniform_int(rng, 0, 300);
    for (int c = 0; c < len; ++c) {
      text += i % 2 ? static_cast<char>(uniform_int(rng, 0, 255))
                    : alphabet[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(alphabet.size()) - 1))];
    }
    if (i % 5 == 0) text.insert(static_cast<std::size_t>(uniform_int(rng, 0, len)), fixture);
    try {
      const auto p = parse_solution_nl(text);
      CHECK_FALSE(p.ops.empty());
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NoOperationsFound);
    }
  }
  // Huge numbers do not overflow into bogus values.
  CHECK(error_code([] { parse_solution_nl("Job 99999999999999999999 Operation 0 on Machine 0 : 0 + 1 -> 1"); }) ==
        ErrorCode::NoOperationsFound);
}

TEST_CASE("round trips on generated instances and solver schedules") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto inst = generate_instance(GenSpec{2 + static_cast<int>(seed % 7), 2 + static_cast<int>(seed % 5), 1,
                                                199, seed});
    const auto m = parse_matrix(emit_matrix(inst, 12.0));
    CHECK(m.instance == inst);
    CHECK(m.makespan == 12.0);
    for (auto style : {NlStyle::JobCentric, NlStyle::MachineCentric}) {
      CHECK(parse_problem_nl(emit_problem_nl(inst, style)) == inst);
    }
    const auto sched = best_dispatch(inst);
    const auto p = parse_solution_nl(emit_solution_nl(sched, inst));
    CHECK(Schedule(inst, p.ops) == Schedule(inst, [&] {
            auto ops = sched.ops();
            std::sort(ops.begin(), ops.end(), [](const ScheduledOp& a, const ScheduledOp& b) {
              return a.start != b.start ? a.start < b.start : a.machine < b.machine;
            });
            return ops;
          }()));
    CHECK(p.claimed_makespan == static_cast<double>(sched.makespan()));
  }
}

TEST_CASE("chat records") {
  std::mt19937_64 rng(1);
  const auto inst = test::example3x3();
  const auto rec = build_chat_record(inst, example_schedule(), NlStyle::MachineCentric, 0, rng, "x");
  CHECK(rec.system == "You are an expert in Job Shop Scheduling Problem");
  CHECK(rec.user.rfind("Instruct: Provide a solution schedule for the JSSP problem below, also indicate the makespan.", 0) ==
        0);
  CHECK(rec.user == std::string(kPromptVariants[0]) + "\n\n" + emit_problem_nl(inst, NlStyle::MachineCentric));
  const std::string tail = "Makespan:  488.0, as it is the maximum end completion time of Operation 2\n";
  CHECK(rec.assistant.substr(rec.assistant.size() - tail.size()) == tail);
  CHECK(rec.metadata.prompt_variant == 0);
  CHECK(rec.metadata.instance_id == "x");

  std::vector<int> a, b;
  std::mt19937_64 r1(5), r2(5);
  for (int i = 0; i < 30; ++i) {
    a.push_back(build_chat_record(inst, example_schedule(), NlStyle::JobCentric, std::nullopt, r1).metadata.prompt_variant);
    b.push_back(build_chat_record(inst, example_schedule(), NlStyle::JobCentric, std::nullopt, r2).metadata.prompt_variant);
  }
  CHECK(a == b);
  for (int v = 0; v < 3; ++v) CHECK(std::count(a.begin(), a.end(), v) > 0);
  CHECK_THROWS_AS(build_chat_record(inst, example_schedule(), NlStyle::JobCentric, 3, rng), Error);
}

TEST_CASE("makespan formatting and style names") {
  CHECK(format_makespan(55) == "55.0");
  CHECK(format_makespan(488) == "488.0");
  CHECK(parse_style("job") == NlStyle::JobCentric);
  CHECK(parse_style("MachineCentric") == NlStyle::MachineCentric);
  CHECK_THROWS_AS(parse_style("diagonal"), Error);
}
