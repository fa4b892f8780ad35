#pragma once

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <thread>
#include <unistd.h>
#include <vector>

#include "synsym/core.hpp"
#include "synsym/hashing.hpp"
#include "synsym/llm.hpp"

namespace testing {

namespace fs = std::filesystem;

inline synsym::LabelScheme toy_scheme() { return synsym::LabelScheme("TOY-2", {"A", "B"}); }

// Two classes with disjoint vocabularies; every sample carries exactly one label.
inline synsym::Corpus toy_separable(int per_class = 10, std::uint64_t seed = 1) {
  static const std::vector<std::string> vocab_a{"alpha", "apple", "anchor", "amber", "arrow", "atlas"};
  static const std::vector<std::string> vocab_b{"beta", "banana", "bridge", "bronze", "bubble", "basin"};
  synsym::Corpus corpus(toy_scheme());
  synsym::Rng rng(seed);
  for (int i = 0; i < per_class; ++i) {
    for (const auto* vocab : {&vocab_a, &vocab_b}) {
      std::string text;
      const int len = 3 + static_cast<int>(rng.below(4));
      for (int w = 0; w < len; ++w) text += (w ? " " : "") + (*vocab)[rng.below(vocab->size())];
      text += " " + std::to_string(i);
      const std::string label = vocab == &vocab_a ? "A" : "B";
      corpus.samples.push_back(synsym::make_sample(text, {label}, "real", "TOY-2"));
    }
  }
  return corpus;
}

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("synsym-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter.fetch_add(1)));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

// Backend that records the peak number of concurrent attempts.
class CountingBackend final : public synsym::llm::Backend {
 public:
  explicit CountingBackend(int delay_ms = 5) : delay_ms_(delay_ms) {}
  std::string id() const override { return "counting"; }
  std::string attempt(const synsym::llm::GenRequest& req) override {
    const int now = ++in_flight_;
    int peak = peak_.load();
    while (now > peak && !peak_.compare_exchange_weak(peak, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms_));
    --in_flight_;
    ++calls_;
    return "echo:" + req.user_prompt;
  }
  int peak() const { return peak_.load(); }
  int calls() const { return calls_.load(); }

 private:
  int delay_ms_;
  std::atomic<int> in_flight_{0};
  std::atomic<int> peak_{0};
  std::atomic<int> calls_{0};
};

}  // namespace testing
