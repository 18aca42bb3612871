#include "jssp/instgen.hpp"

#include <charconv>
#include <limits>
#include <numeric>
#include <sstream>

#include "jssp/parallel.hpp"

namespace jssp {

void GenSpec::validate() const {
  if (num_jobs < 1) throw Error(ErrorCode::InvalidSpec, "num_jobs must be >= 1");
  if (num_machines < 1) throw Error(ErrorCode::InvalidSpec, "num_machines must be >= 1");
  if (dur_min < 1) throw Error(ErrorCode::InvalidSpec, "dur_min must be >= 1");
  if (dur_max < dur_min) throw Error(ErrorCode::InvalidSpec, "dur_max must be >= dur_min");
}

std::vector<InstanceSize> parse_sizes(const std::string& text) {
  std::vector<InstanceSize> sizes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    while (!item.empty() && item.front() == ' ') item.erase(item.begin());
    while (!item.empty() && item.back() == ' ') item.pop_back();
    if (item.empty()) continue;
    const auto x = item.find_first_of("xX");
    InstanceSize s;
    const char* b = item.data();
    const char* e = item.data() + item.size();
    if (x == std::string::npos ||
        std::from_chars(b, b + x, s.jobs).ptr != b + x ||
        std::from_chars(b + x + 1, e, s.machines).ptr != e || s.jobs < 1 || s.machines < 1) {
      throw Error(ErrorCode::InvalidSpec, "bad size '" + item + "', expected JxM");
    }
    sizes.push_back(s);
  }
  if (sizes.empty()) throw Error(ErrorCode::InvalidSpec, "no sizes given");
  return sizes;
}

std::string format_size(InstanceSize size) {
  return std::to_string(size.jobs) + "x" + std::to_string(size.machines);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
  return splitmix64(master_seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  const auto range = static_cast<std::uint64_t>(static_cast<std::int64_t>(hi) - lo) + 1;
  // Largest multiple of range representable; values at or above it are rejected.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t v = rng();
  while (v >= limit) v = rng();
  return static_cast<int>(lo + static_cast<std::int64_t>(v % range));
}

JsspInstance generate_instance(const GenSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::vector<std::vector<Operation>> jobs(static_cast<std::size_t>(spec.num_jobs));
  std::vector<int> order(static_cast<std::size_t>(spec.num_machines));
  for (auto& job : jobs) {
    std::iota(order.begin(), order.end(), 0);
    for (int i = spec.num_machines - 1; i > 0; --i) {
      std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(uniform_int(rng, 0, i))]);
    }
    job.reserve(order.size());
    for (int m : order) job.push_back(Operation{m, uniform_int(rng, spec.dur_min, spec.dur_max)});
  }
  return JsspInstance(spec.num_jobs, spec.num_machines, std::move(jobs));
}

namespace {

void check_batch(const BatchSpec& spec) {
  if (spec.sizes.empty()) throw Error(ErrorCode::InvalidSpec, "batch needs at least one size");
  if (spec.count_per_size < 1) throw Error(ErrorCode::InvalidSpec, "count_per_size must be >= 1");
}

BatchItem make_item(const BatchSpec& spec, std::size_t k) {
  const auto per = static_cast<std::size_t>(spec.count_per_size);
  BatchItem item;
  item.index = k;
  item.size = spec.sizes[k / per];
  item.seed = derive_seed(spec.master_seed, k);
  item.instance = generate_instance(GenSpec{item.size.jobs, item.size.machines, spec.dur_min, spec.dur_max, item.seed});
  return item;
}

}  // namespace

std::vector<BatchItem> generate_batch(const BatchSpec& spec, int workers) {
  check_batch(spec);
  std::vector<BatchItem> out(spec.sizes.size() * static_cast<std::size_t>(spec.count_per_size));
  parallel_for(out.size(), workers, [&](std::size_t k) { out[k] = make_item(spec, k); });
  return out;
}

std::vector<BatchItem> generate_batch_serial(const BatchSpec& spec) {
  check_batch(spec);
  std::vector<BatchItem> out;
  const std::size_t n = spec.sizes.size() * static_cast<std::size_t>(spec.count_per_size);
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) out.push_back(make_item(spec, k));
  return out;
}

}  // namespace jssp
