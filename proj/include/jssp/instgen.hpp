#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "jssp/core.hpp"

namespace jssp {

struct GenSpec {
  int num_jobs = 1;
  int num_machines = 1;
  int dur_min = 1;
  int dur_max = 1;
  std::uint64_t seed = 0;

  /// Throws InvalidSpec when a field is out of range.
  void validate() const;
};

struct InstanceSize {
  int jobs = 0;
  int machines = 0;

  friend bool operator==(const InstanceSize&, const InstanceSize&) = default;
};

/// Parses "2x2,3x3,10x5".
std::vector<InstanceSize> parse_sizes(const std::string& text);
std::string format_size(InstanceSize size);

/// Deterministic 64-bit mixer.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of element `index` of a batch: splitmix64(master + (index + 1) * golden gamma).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

/// Uniform draw in [lo, hi] from raw mt19937_64 output by rejection, so the
/// sequence is identical on every standard library.
int uniform_int(std::mt19937_64& rng, int lo, int hi);

/// Each job visits a fresh uniform permutation of the machines; each
/// duration is uniform in [dur_min, dur_max].
JsspInstance generate_instance(const GenSpec& spec);

struct BatchSpec {
  std::vector<InstanceSize> sizes;
  int count_per_size = 1;
  int dur_min = 1;
  int dur_max = 1;
  std::uint64_t master_seed = 0;
};

struct BatchItem {
  std::uint64_t index = 0;
  InstanceSize size;
  std::uint64_t seed = 0;
  JsspInstance instance;
};

/// count_per_size instances for each size in order; item k uses derive_seed(master, k).
std::vector<BatchItem> generate_batch(const BatchSpec& spec, int workers = 0);

/// Single-threaded reference for generate_batch.
std::vector<BatchItem> generate_batch_serial(const BatchSpec& spec);

}  // namespace jssp
