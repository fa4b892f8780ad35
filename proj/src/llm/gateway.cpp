#include <algorithm>
#include <cmath>
#include <thread>

#include "synsym/hashing.hpp"
#include "synsym/llm.hpp"

namespace synsym::llm {

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::kExpansion: return "expansion";
    case Stage::kGeneration: return "generation";
    case Stage::kEvaluation: return "evaluation";
    case Stage::kRewrite: return "rewrite";
    case Stage::kClassify: return "classify";
  }
  return "generation";
}

std::optional<Stage> parse_stage(std::string_view text) {
  for (Stage s : {Stage::kExpansion, Stage::kGeneration, Stage::kEvaluation, Stage::kRewrite,
                  Stage::kClassify}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

double default_temperature(Stage stage) {
  return stage == Stage::kGeneration ? 0.8 : 0.0;
}

int default_max_tokens(Stage stage) {
  return stage == Stage::kEvaluation ? 256 : 1024;
}

GenRequest GenRequest::make(Stage stage, std::string system_prompt, std::string user_prompt) {
  GenRequest req;
  req.stage = stage;
  req.system_prompt = std::move(system_prompt);
  req.user_prompt = std::move(user_prompt);
  req.temperature = default_temperature(stage);
  req.max_output_tokens = default_max_tokens(stage);
  return req;
}

void validate(const GenRequest& req) {
  if (!(req.temperature >= 0.0 && req.temperature <= 2.0)) {
    throw Error(Errc::kInvalidArgument, "temperature must lie in [0, 2]");
  }
  if (req.max_output_tokens <= 0) throw Error(Errc::kInvalidArgument, "max_output_tokens must be positive");
}

void validate(const ProviderConfig& cfg) {
  if (cfg.retry.max_attempts < 1) throw Error(Errc::kInvalidArgument, "retry max_attempts must be >= 1");
  if (cfg.retry.backoff_base_ms < 0) throw Error(Errc::kInvalidArgument, "backoff base must be >= 0");
  if (cfg.retry.jitter < 0.0 || cfg.retry.jitter >= 1.0) {
    throw Error(Errc::kInvalidArgument, "backoff jitter must lie in [0, 1)");
  }
  if (cfg.max_concurrency < 1) throw Error(Errc::kInvalidArgument, "max_concurrency must be >= 1");
  if (cfg.kind == ProviderKind::kHttpChat && cfg.endpoint.empty()) {
    throw Error(Errc::kInvalidArgument, "http provider needs an endpoint");
  }
}

ProviderConfig mock_provider(std::uint64_t seed, std::map<std::string, std::string> fixtures) {
  ProviderConfig cfg;
  cfg.kind = ProviderKind::kMock;
  cfg.model = "mock";
  cfg.mock_seed = seed;
  cfg.fixtures = std::move(fixtures);
  cfg.retry.backoff_base_ms = 0;
  return cfg;
}

std::map<std::string, std::string> load_fixture_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(Errc::kIo, "fixture directory not found: " + dir.string());
  }
  std::map<std::string, std::string> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string key = entry.path().filename().string();
    if (key.size() > 4 && key.compare(key.size() - 4, 4, ".txt") == 0) key.resize(key.size() - 4);
    out[key] = read_file(entry.path());
  }
  return out;
}

std::unique_ptr<Backend> make_mock_backend(const ProviderConfig& cfg);
std::unique_ptr<Backend> make_http_backend(const ProviderConfig& cfg);

std::unique_ptr<Backend> make_backend(const ProviderConfig& cfg) {
  validate(cfg);
  if (cfg.kind == ProviderKind::kMock) return make_mock_backend(cfg);
  return make_http_backend(cfg);
}

Gateway::Gateway(const ProviderConfig& cfg)
    : Gateway(make_backend(cfg), cfg.retry, cfg.max_concurrency) {}

Gateway::Gateway(std::unique_ptr<Backend> backend, RetryPolicy retry, int max_concurrency)
    : backend_(std::move(backend)), retry_(retry), max_concurrency_(max_concurrency) {
  if (!backend_) throw Error(Errc::kInvalidArgument, "gateway needs a backend");
  if (max_concurrency_ < 1) throw Error(Errc::kInvalidArgument, "max_concurrency must be >= 1");
  if (retry_.max_attempts < 1) throw Error(Errc::kInvalidArgument, "retry max_attempts must be >= 1");
  sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

std::uint64_t Gateway::total_requests() const {
  std::uint64_t total = 0;
  for (const auto& r : requests_) total += r.load();
  return total;
}

void Gateway::acquire() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return in_flight_ < max_concurrency_; });
  ++in_flight_;
  int peak = peak_in_flight_.load();
  while (in_flight_ > peak && !peak_in_flight_.compare_exchange_weak(peak, in_flight_)) {
  }
}

void Gateway::release() {
  {
    std::lock_guard lock(mu_);
    --in_flight_;
  }
  cv_.notify_one();
}

std::chrono::milliseconds Gateway::backoff(int attempt) {
  double base = static_cast<double>(retry_.backoff_base_ms) * std::ldexp(1.0, attempt - 1);
  Rng rng(derive_seed(jitter_counter_.fetch_add(1), "backoff"));
  double factor = 1.0 + retry_.jitter * (2.0 * rng.unit() - 1.0);
  return std::chrono::milliseconds(static_cast<long long>(std::llround(base * factor)));
}

GenResponse Gateway::complete(const GenRequest& req) {
  validate(req);
  requests_[static_cast<std::size_t>(req.stage)].fetch_add(1);
  const auto start = std::chrono::steady_clock::now();
  std::string last_error;
  for (int attempt = 1; attempt <= retry_.max_attempts; ++attempt) {
    acquire();
    std::string text;
    bool transient = false;
    try {
      text = backend_->attempt(req);
    } catch (const Error& e) {
      if (e.code() != Errc::kTransient) {
        release();
        throw;
      }
      transient = true;
      last_error = e.what();
    } catch (...) {
      release();
      throw;
    }
    release();
    if (!transient) {
      if (trim(text).empty()) {
        throw Error(Errc::kMalformedReply, backend_->id() + " returned an empty completion");
      }
      GenResponse resp;
      resp.text = std::move(text);
      resp.provider_id = backend_->id();
      resp.attempt_count = attempt;
      resp.latency_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      return resp;
    }
    if (attempt < retry_.max_attempts) {
      auto delay = backoff(attempt);
      if (delay.count() > 0) sleeper_(delay);
    }
  }
  throw Error(Errc::kProviderExhausted, backend_->id() + " failed after " +
                                            std::to_string(retry_.max_attempts) +
                                            " attempts: " + last_error);
}

std::vector<Outcome> Gateway::complete_all(const std::vector<GenRequest>& reqs) {
  std::vector<Outcome> out(reqs.size());
  auto run_one = [&](std::size_t i) {
    try {
      out[i].response = complete(reqs[i]);
    } catch (const Error& e) {
      out[i].error = e;
    } catch (const std::exception& e) {
      out[i].error = Error(Errc::kProviderExhausted, e.what());
    }
  };
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(max_concurrency_), reqs.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < reqs.size(); ++i) run_one(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < reqs.size(); i = next.fetch_add(1)) run_one(i);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

GenResponse complete(const GenRequest& req, const ProviderConfig& cfg) {
  Gateway gateway(cfg);
  return gateway.complete(req);
}

}  // namespace synsym::llm
