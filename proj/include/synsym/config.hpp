#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "synsym/classifier.hpp"
#include "synsym/evaluator.hpp"
#include "synsym/json_io.hpp"
#include "synsym/llm.hpp"
#include "synsym/pipeline.hpp"

namespace synsym::app {

struct ProtocolConfig {
  int k = 5;
  std::vector<std::uint64_t> seeds = eval::kDefaultSeeds;
  std::uint64_t split_seed = 42;
  double train_ratio = 0.8;
  int parallelism = 1;
};

struct RunConfig {
  std::uint64_t seed = 42;
  llm::ProviderConfig provider;
  gen::PipelineConfig pipeline;
  clf::TrainHyper train;
  bool sentence_aggregation = false;
  ProtocolConfig protocol;
};

/// Shipped symptoms and background knowledge, mock provider, root seed 42.
RunConfig default_run_config();

/// Sections "seed", "provider", "pipeline", "train", "protocol"; absent keys
/// keep their defaults. Relative paths resolve against `base_dir`. Throws
/// SchemaViolation on bad types, Io on missing files and InvalidArgument on
/// out-of-range values.
RunConfig parse_run_config(const Json& j, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

/// Sets the root seed and the seeds derived from it.
void apply_seed(RunConfig& cfg, std::uint64_t seed);
/// Switches to the mock backend (zero backoff, no network).
void force_mock(RunConfig& cfg);

/// Throws on any invalid section.
void validate(const RunConfig& cfg);

}  // namespace synsym::app
