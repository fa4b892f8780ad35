#include "synsym/config.hpp"

#include "synsym/embedded.hpp"
#include "synsym/errors.hpp"
#include "synsym/hashing.hpp"

namespace synsym::app {

namespace fs = std::filesystem;

namespace {

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  if (path.is_relative()) path = base / path;
  return path;
}

fs::path existing(const fs::path& base, const std::string& p, bool directory) {
  fs::path path = resolve(base, p);
  if (directory ? !fs::is_directory(path) : !fs::is_regular_file(path)) {
    throw Error(Errc::kIo, (directory ? "directory not found: " : "file not found: ") + path.string());
  }
  return path;
}

const Json& section(const Json& j, const char* name) {
  static const Json empty = Json::object();
  auto it = j.find(name);
  if (it == j.end()) return empty;
  if (!it->is_object()) throw Error(Errc::kSchemaViolation, std::string("config section '") + name + "' must be an object");
  return *it;
}

template <typename T>
void read(const Json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

void parse_provider(const Json& j, const fs::path& base, RunConfig& cfg) {
  auto& p = cfg.provider;
  if (auto it = j.find("kind"); it != j.end()) {
    const auto kind = it->get<std::string>();
    if (kind == "mock") {
      p.kind = llm::ProviderKind::kMock;
    } else if (kind == "http") {
      p.kind = llm::ProviderKind::kHttpChat;
      p.retry = llm::RetryPolicy{};
    } else {
      throw Error(Errc::kInvalidArgument, "provider kind must be 'mock' or 'http', got '" + kind + "'");
    }
  }
  read(j, "endpoint", p.endpoint);
  read(j, "model", p.model);
  read(j, "api_key_env", p.api_key_env);
  read(j, "max_attempts", p.retry.max_attempts);
  read(j, "backoff_base_ms", p.retry.backoff_base_ms);
  read(j, "jitter", p.retry.jitter);
  read(j, "max_concurrency", p.max_concurrency);
  read(j, "timeout_seconds", p.timeout_seconds);
  read(j, "mock_fail_first", p.mock_fail_first);
  if (auto it = j.find("fixtures_dir"); it != j.end()) {
    p.fixtures = llm::load_fixture_dir(existing(base, it->get<std::string>(), true));
  }
}

void parse_pipeline(const Json& j, const fs::path& base, RunConfig& cfg) {
  auto& p = cfg.pipeline;
  if (auto it = j.find("scheme"); it != j.end()) {
    const auto ref = it->get<std::string>();
    p.scheme = load_scheme(fs::exists(resolve(base, ref)) ? resolve(base, ref).string() : ref);
  }
  if (auto it = j.find("symptoms"); it != j.end()) {
    if (it->is_string()) {
      p.symptoms = load_symptom_specs(existing(base, it->get<std::string>(), false));
    } else if (it->is_array()) {
      p.symptoms.clear();
      for (const auto& item : *it) p.symptoms.push_back(symptom_spec_from_json(item));
    } else {
      throw Error(Errc::kSchemaViolation, "pipeline.symptoms must be a path or an array");
    }
  }
  if (auto it = j.find("background_knowledge"); it != j.end()) {
    p.background_knowledge = read_file(existing(base, it->get<std::string>(), false));
  }
  if (auto it = j.find("prompts_dir"); it != j.end()) {
    p.prompts = PromptLibrary::with_overrides(existing(base, it->get<std::string>(), true));
  }
  read(j, "single_batches_per_subconcept", p.single_batches_per_subconcept);
  read(j, "expressions_per_batch", p.expressions_per_batch);
  read(j, "combination_target", p.combination_target);
  read(j, "combinations_per_prompt", p.combinations_per_prompt);
  read(j, "multi_per_style", p.multi_per_style);
  read(j, "min_subconcepts", p.min_subconcepts);
  read(j, "stall_limit", p.stall_limit);
  read(j, "score_threshold", p.score_threshold);
  const Json& temps = section(j, "temperatures");
  read(temps, "expansion", p.temperatures.expansion);
  read(temps, "generation", p.temperatures.generation);
  read(temps, "evaluation", p.temperatures.evaluation);
  const Json& flags = section(j, "flags");
  read(flags, "EV", p.flags.use_ev);
  read(flags, "CK", p.flags.use_ck);
  read(flags, "DU", p.flags.use_du);
  read(flags, "SE", p.flags.use_se);
}

void parse_protocol(const Json& j, RunConfig& cfg) {
  auto& p = cfg.protocol;
  read(j, "k", p.k);
  read(j, "seeds", p.seeds);
  read(j, "split_seed", p.split_seed);
  read(j, "train_ratio", p.train_ratio);
  read(j, "parallelism", p.parallelism);
}

}  // namespace

RunConfig default_run_config() {
  RunConfig cfg;
  cfg.pipeline.symptoms.clear();
  for (const auto& item : Json::parse(embedded::get("symptoms/dsm5-14.json"))) {
    cfg.pipeline.symptoms.push_back(symptom_spec_from_json(item));
  }
  cfg.pipeline.background_knowledge = embedded::get("background_knowledge.txt");
  cfg.provider = llm::mock_provider(0);
  apply_seed(cfg, cfg.seed);
  return cfg;
}

RunConfig parse_run_config(const Json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw Error(Errc::kSchemaViolation, "config must be a JSON object");
  RunConfig cfg = default_run_config();
  try {
    parse_provider(section(j, "provider"), base_dir, cfg);
    parse_pipeline(section(j, "pipeline"), base_dir, cfg);
    const Json& train = section(j, "train");
    cfg.train = clf::train_hyper_from_json(train, cfg.train);
    read(train, "sentence_aggregation", cfg.sentence_aggregation);
    parse_protocol(section(j, "protocol"), cfg);
    std::uint64_t seed = cfg.seed;
    read(j, "seed", seed);
    apply_seed(cfg, seed);
  } catch (const Json::exception& e) {
    throw Error(Errc::kSchemaViolation, std::string("config: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

RunConfig load_run_config(const fs::path& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::exception& e) {
    throw Error(Errc::kSchemaViolation, path.string() + ": " + e.what());
  }
  return parse_run_config(j, fs::absolute(path).parent_path());
}

void apply_seed(RunConfig& cfg, std::uint64_t seed) {
  cfg.seed = seed;
  cfg.pipeline.seed = derive_seed(seed, "pipeline");
  cfg.provider.mock_seed = derive_seed(seed, "mock");
}

void force_mock(RunConfig& cfg) {
  cfg.provider.kind = llm::ProviderKind::kMock;
  cfg.provider.retry.backoff_base_ms = 0;
}

void validate(const RunConfig& cfg) {
  llm::validate(cfg.provider);
  gen::validate(cfg.pipeline);
  clf::validate(cfg.train);
  const auto& p = cfg.protocol;
  if (p.seeds.empty()) throw Error(Errc::kInvalidArgument, "protocol.seeds must not be empty");
  if (p.k < 2) throw Error(Errc::kInvalidArgument, "protocol.k must be at least 2");
  if (!(p.train_ratio > 0.0 && p.train_ratio < 1.0)) {
    throw Error(Errc::kInvalidArgument, "protocol.train_ratio must lie in (0, 1)");
  }
  if (p.parallelism < 1) throw Error(Errc::kInvalidArgument, "protocol.parallelism must be at least 1");
}

}  // namespace synsym::app
