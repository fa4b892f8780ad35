#pragma once

#include <array>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "synsym/errors.hpp"
#include "synsym/json_io.hpp"

namespace synsym::llm {

enum class Stage { kExpansion, kGeneration, kEvaluation, kRewrite, kClassify };
inline constexpr std::size_t kStageCount = 5;

std::string_view to_string(Stage stage);
std::optional<Stage> parse_stage(std::string_view text);

/// Sampling temperature per stage: 0.0 for expansion and evaluation, 0.8 for
/// generation. Rewrite and classification run at 0.0.
double default_temperature(Stage stage);
/// 256 for evaluation, 1024 otherwise.
int default_max_tokens(Stage stage);

struct GenRequest {
  std::string system_prompt;
  std::string user_prompt;
  double temperature = 0.0;
  int max_output_tokens = 1024;
  Stage stage = Stage::kGeneration;
  // Routing key for mock fixtures, e.g. "expand:Depressed Mood". Not sent on the wire.
  std::string fixture_key;
  // Structured request parameters the mock uses to fill unkeyed replies. Not sent on the wire.
  Json hints = Json::object();

  static GenRequest make(Stage stage, std::string system_prompt, std::string user_prompt);
};

/// Throws InvalidArgument on temperature outside [0, 2] or non-positive token budget.
void validate(const GenRequest& req);

struct GenResponse {
  std::string text;
  std::string provider_id;
  double latency_ms = 0.0;
  int attempt_count = 1;
};

struct RetryPolicy {
  int max_attempts = 3;
  int backoff_base_ms = 500;
  double jitter = 0.2;
};

enum class ProviderKind { kHttpChat, kMock };

struct ProviderConfig {
  ProviderKind kind = ProviderKind::kMock;
  std::string endpoint;
  std::string model;
  std::string api_key_env = "SYNSYM_API_KEY";
  RetryPolicy retry;
  int max_concurrency = 4;
  int timeout_seconds = 120;

  // Mock backend only.
  std::uint64_t mock_seed = 0;
  std::map<std::string, std::string> fixtures;
  int mock_fail_first = 0;  // first N attempts fail with a transient error
};

/// Throws InvalidArgument when bounds are violated.
void validate(const ProviderConfig& cfg);

/// Deterministic mock configuration with zero backoff.
ProviderConfig mock_provider(std::uint64_t seed, std::map<std::string, std::string> fixtures = {});

/// Every regular file in `dir`, keyed by file name with a trailing ".txt" removed.
std::map<std::string, std::string> load_fixture_dir(const std::filesystem::path& dir);

/// A single-attempt transport. Retryable failures throw Error(Errc::kTransient).
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string id() const = 0;
  virtual std::string attempt(const GenRequest& req) = 0;
};

std::unique_ptr<Backend> make_backend(const ProviderConfig& cfg);

struct Outcome {
  std::optional<GenResponse> response;
  std::optional<Error> error;

  bool ok() const { return response.has_value(); }
};

/// Retrying, concurrency-bounded front for a backend. Safe for concurrent callers.
class Gateway {
 public:
  explicit Gateway(const ProviderConfig& cfg);
  Gateway(std::unique_ptr<Backend> backend, RetryPolicy retry, int max_concurrency);

  Gateway(const Gateway&) = delete;
  Gateway& operator=(const Gateway&) = delete;

  /// First successful reply. Throws ProviderExhausted, MalformedReply or any
  /// non-transient backend error.
  GenResponse complete(const GenRequest& req);

  /// Issues all requests with up to max_concurrency in flight; outcomes are
  /// returned in input order.
  std::vector<Outcome> complete_all(const std::vector<GenRequest>& reqs);

  std::string provider_id() const { return backend_->id(); }
  int max_concurrency() const { return max_concurrency_; }

  std::uint64_t requests(Stage stage) const { return requests_[static_cast<std::size_t>(stage)].load(); }
  std::uint64_t total_requests() const;
  int peak_in_flight() const { return peak_in_flight_.load(); }

  void set_sleeper(std::function<void(std::chrono::milliseconds)> sleeper) { sleeper_ = std::move(sleeper); }

 private:
  void acquire();
  void release();
  std::chrono::milliseconds backoff(int attempt);

  std::unique_ptr<Backend> backend_;
  RetryPolicy retry_;
  int max_concurrency_;
  std::function<void(std::chrono::milliseconds)> sleeper_;

  std::mutex mu_;
  std::condition_variable cv_;
  int in_flight_ = 0;
  std::atomic<int> peak_in_flight_{0};
  std::atomic<std::uint64_t> jitter_counter_{0};
  std::array<std::atomic<std::uint64_t>, kStageCount> requests_{};
};

/// One-shot convenience over a temporary Gateway.
GenResponse complete(const GenRequest& req, const ProviderConfig& cfg);

}  // namespace synsym::llm
