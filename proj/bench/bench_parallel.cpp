// Serial reference kernels against their OpenMP counterparts.
//
//   ./build/bench/jssp_bench --benchmark_filter=Solve
//
// The second argument of the parallel cases is the worker count.

#include <benchmark/benchmark.h>

#include "jssp/instgen.hpp"
#include "jssp/nlcodec.hpp"
#include "jssp/parallel.hpp"
#include "jssp/solver.hpp"
#include "jssp/validator.hpp"

namespace {

jssp::BatchSpec batch_spec(std::size_t count) {
  jssp::BatchSpec spec;
  spec.sizes = {{6, 6}, {10, 5}, {15, 10}};
  spec.count_per_size = count;
  spec.dur_min = 1;
  spec.dur_max = 199;
  spec.master_seed = 11;
  return spec;
}

std::vector<jssp::JsspInstance> instances(std::size_t count) {
  std::vector<jssp::JsspInstance> out;
  for (auto& item : jssp::generate_batch_serial(batch_spec(count))) out.push_back(std::move(item.instance));
  return out;
}

jssp::AnytimeOptions short_anneal() {
  jssp::AnytimeOptions opt;
  opt.seed = 3;
  opt.max_iterations = 5'000;
  opt.stall_iterations = 1'000;
  return opt;
}

void BM_GenerateSerial(benchmark::State& state) {
  const auto spec = batch_spec(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(jssp::generate_batch_serial(spec));
}
BENCHMARK(BM_GenerateSerial)->Arg(200);

void BM_GenerateParallel(benchmark::State& state) {
  const auto spec = batch_spec(static_cast<std::size_t>(state.range(0)));
  const int workers = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(jssp::generate_batch(spec, workers));
}
BENCHMARK(BM_GenerateParallel)->Args({200, 2})->Args({200, 4});

void BM_SolveSerial(benchmark::State& state) {
  const auto inst = instances(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(jssp::solve_batch_serial(inst, short_anneal()));
}
BENCHMARK(BM_SolveSerial)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_SolveParallel(benchmark::State& state) {
  const auto inst = instances(static_cast<std::size_t>(state.range(0)));
  const int workers = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(jssp::solve_batch(inst, short_anneal(), workers));
}
BENCHMARK(BM_SolveParallel)->Args({4, 2})->Args({4, 4})->Unit(benchmark::kMillisecond);

std::vector<std::string> candidate_texts(const jssp::JsspInstance& inst) {
  std::vector<std::string> texts;
  for (int i = 0; i < 64; ++i) {
    const auto s = jssp::dispatch_heuristic(inst, jssp::kAllRules[static_cast<std::size_t>(i) % 4]);
    auto text = jssp::emit_solution_nl(s, inst);
    if (i % 3 == 0) text += " Job 0 Operation 0 on Machine 0 : 0 + 1 -> 1\n";
    texts.push_back(std::move(text));
  }
  return texts;
}

void BM_ValidateSerial(benchmark::State& state) {
  const auto inst = jssp::generate_instance({15, 10, 1, 199, 5});
  const auto texts = candidate_texts(inst);
  for (auto _ : state) benchmark::DoNotOptimize(jssp::validate_many_serial(inst, texts));
}
BENCHMARK(BM_ValidateSerial);

void BM_ValidateParallel(benchmark::State& state) {
  const auto inst = jssp::generate_instance({15, 10, 1, 199, 5});
  const auto texts = candidate_texts(inst);
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(jssp::validate_many(inst, texts, workers));
}
BENCHMARK(BM_ValidateParallel)->Arg(2)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
