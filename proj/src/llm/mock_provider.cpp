// Deterministic offline backend. Replies are a pure function of
// (seed, fixture key, prompts) except for the scripted-failure counter and
// "@n" sequence fixtures, which advance per call.

#include <algorithm>
#include <cctype>
#include <sstream>

#include "synsym/hashing.hpp"
#include "synsym/llm.hpp"

namespace synsym::llm {
namespace {

constexpr std::string_view kFailSentinel = "@fail";
constexpr std::string_view kMalformedSentinel = "@malformed";

const std::vector<std::string_view>& openers(Style style) {
  static const std::vector<std::string_view> clinical = {
      "I have been experiencing", "I consistently report", "I am presenting with",
      "I exhibit persistent", "I have noticed a marked pattern of", "I meet the description of"};
  static const std::vector<std::string_view> colloquial = {
      "honestly i keep dealing with", "lately it's just", "i can't shake this",
      "ugh, every day it's", "not gonna lie, i'm stuck with", "idk why but there's so much"};
  return style == Style::kClinical ? clinical : colloquial;
}

const std::vector<std::string_view>& fillers() {
  static const std::vector<std::string_view> words = {
      "at work",      "in the mornings", "most nights",  "around friends", "for weeks now",
      "since spring", "at school",       "every weekend", "when alone",    "after dinner",
      "on the bus",   "during calls",    "all month",     "without reason", "more than before"};
  return words;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string str_hint(const Json& hints, const char* key) {
  auto it = hints.find(key);
  return it != hints.end() && it->is_string() ? it->get<std::string>() : std::string();
}

int int_hint(const Json& hints, const char* key, int fallback) {
  auto it = hints.find(key);
  return it != hints.end() && it->is_number_integer() ? it->get<int>() : fallback;
}

std::vector<std::string> list_hint(const Json& hints, const char* key) {
  std::vector<std::string> out;
  if (auto it = hints.find(key); it != hints.end() && it->is_array()) {
    for (const auto& v : *it) {
      if (v.is_string()) out.push_back(v.get<std::string>());
    }
  }
  return out;
}

std::string statement(Rng& rng, Style style, const std::string& topic, std::size_t index) {
  const auto& open = openers(style);
  const auto& fill = fillers();
  std::ostringstream s;
  s << open[rng.below(open.size())] << ' ' << topic << ' ' << fill[rng.below(fill.size())] << ", "
    << fill[rng.below(fill.size())] << " (note " << index + 1 << '-' << rng.below(100000) << ").";
  s << " [" << to_string(style) << ']';
  return s.str();
}

std::string fill_expand(Rng& rng, const Json& hints) {
  const std::string keyword = lower(str_hint(hints, "keyword"));
  const auto& fill = fillers();
  const std::size_t n = 12 + rng.below(7);
  std::ostringstream out;
  for (std::size_t i = 0; i < n; ++i) {
    out << i + 1 << ". " << keyword << " variant " << i + 1 << " noticed " << fill[rng.below(fill.size())]
        << '\n';
  }
  return out.str();
}

std::string fill_statements(Rng& rng, const Json& hints, const std::string& topic) {
  const int clinical = int_hint(hints, "n_clinical", 0);
  const int colloquial = int_hint(hints, "n_colloquial", 0);
  std::ostringstream out;
  std::size_t index = 0;
  for (int i = 0; i < clinical; ++i, ++index) {
    out << index + 1 << ". " << statement(rng, Style::kClinical, topic, index) << '\n';
  }
  for (int i = 0; i < colloquial; ++i, ++index) {
    out << index + 1 << ". " << statement(rng, Style::kColloquial, topic, index) << '\n';
  }
  return out.str();
}

std::string fill_single(Rng& rng, const Json& hints) {
  std::string topic = lower(str_hint(hints, "keyword"));
  std::string detail = str_hint(hints, "sub_concept");
  if (detail.empty()) detail = str_hint(hints, "description");
  if (!detail.empty()) topic += " with " + lower(detail);
  return fill_statements(rng, hints, topic);
}

std::string fill_multi(Rng& rng, const Json& hints) {
  auto keywords = list_hint(hints, "keywords");
  std::string topic;
  for (std::size_t i = 0; i < keywords.size(); ++i) {
    if (i > 0) topic += i + 1 == keywords.size() ? " and " : ", ";
    topic += lower(keywords[i]);
  }
  return fill_statements(rng, hints, topic);
}

std::string fill_combine(Rng& rng, const Json& hints) {
  auto classes = list_hint(hints, "classes");
  const int count = int_hint(hints, "count", 10);
  static const char* kSeverities[] = {"mild", "moderate", "severe"};
  std::ostringstream out;
  if (classes.size() < 2) return "1. none\n";
  for (int i = 0; i < count; ++i) {
    std::vector<std::string> pool = classes;
    rng.shuffle(pool);
    const std::size_t size = 2 + rng.below(std::min<std::size_t>(4, pool.size() - 1));
    out << i + 1 << ". ";
    for (std::size_t m = 0; m < size; ++m) {
      if (m > 0) out << "; ";
      out << pool[m] << " (" << kSeverities[rng.below(3)] << ')';
    }
    out << '\n';
  }
  return out.str();
}

std::string fill_score(Rng& rng) {
  // Mostly acceptable ratings with an occasional low one.
  const std::uint64_t roll = rng.below(10);
  const int score = roll == 0 ? 2 : 3 + static_cast<int>(rng.below(3));
  return "The expression reflects the target symptoms.\nScore: " + std::to_string(score) + "\n";
}

std::string fill_classify(Rng& rng, const Json& hints) {
  auto classes = list_hint(hints, "classes");
  const std::string strategy = str_hint(hints, "strategy");
  std::ostringstream out;
  if (strategy == "ps") out << "Plan: read the post, compare it to each symptom, then decide.\n";
  if (strategy == "cot" || strategy == "ps") out << "Step 1: the post describes how the speaker feels.\n";
  const std::size_t n = classes.empty() ? 0 : rng.below(std::min<std::size_t>(3, classes.size() + 1));
  rng.shuffle(classes);
  out << "Labels: ";
  if (n == 0) out << "none";
  for (std::size_t i = 0; i < n; ++i) out << (i ? "; " : "") << classes[i];
  out << '\n';
  return out.str();
}

class MockBackend final : public Backend {
 public:
  explicit MockBackend(const ProviderConfig& cfg)
      : seed_(cfg.mock_seed), fixtures_(cfg.fixtures), fail_first_(cfg.mock_fail_first) {}

  std::string id() const override { return "mock:" + std::to_string(seed_); }

  std::string attempt(const GenRequest& req) override {
    if (attempts_.fetch_add(1) < static_cast<std::uint64_t>(std::max(fail_first_, 0))) {
      throw Error(Errc::kTransient, "scripted mock failure");
    }
    if (auto fixture = lookup(req.fixture_key)) {
      if (trim(*fixture) == kFailSentinel) throw Error(Errc::kTransient, "fixture requested failure");
      if (trim(*fixture) == kMalformedSentinel) {
        throw Error(Errc::kMalformedReply, "fixture requested a malformed reply");
      }
      return *fixture;
    }
    return synthesize(req);
  }

 private:
  bool has(const std::string& key) const { return fixtures_.count(key) != 0; }

  // Tries the full key, then drops trailing ":segment" parts.
  std::optional<std::string> lookup(const std::string& key) {
    std::string candidate = key;
    while (!candidate.empty()) {
      if (has(candidate) || has(candidate + "@1")) return select(candidate);
      auto pos = candidate.rfind(':');
      if (pos == std::string::npos) break;
      candidate.resize(pos);
    }
    return std::nullopt;
  }

  std::string select(const std::string& key) {
    std::size_t call;
    {
      std::lock_guard lock(mu_);
      call = ++calls_[key];
    }
    if (auto it = fixtures_.find(key + "@" + std::to_string(call)); it != fixtures_.end()) return it->second;
    if (auto it = fixtures_.find(key); it != fixtures_.end()) return it->second;
    // Past the end of a sequence: repeat its last entry.
    std::string last;
    for (std::size_t n = 1; has(key + "@" + std::to_string(n)); ++n) last = fixtures_.at(key + "@" + std::to_string(n));
    return last;
  }

  std::string synthesize(const GenRequest& req) const {
    std::uint64_t h = fnv1a64(req.fixture_key);
    h = fnv1a64("\x1f", h);
    h = fnv1a64(req.system_prompt, h);
    h = fnv1a64("\x1f", h);
    h = fnv1a64(req.user_prompt, h);
    Rng rng(derive_seed(seed_, to_hex16(h)));
    const std::string task = str_hint(req.hints, "task");
    if (task == "expand" || (task.empty() && req.stage == Stage::kExpansion)) return fill_expand(rng, req.hints);
    if (task == "single") return fill_single(rng, req.hints);
    if (task == "multi") return fill_multi(rng, req.hints);
    if (task == "combine") return fill_combine(rng, req.hints);
    if (task == "score" || (task.empty() && req.stage == Stage::kEvaluation)) return fill_score(rng);
    if (task == "classify" || (task.empty() && req.stage == Stage::kClassify)) {
      return fill_classify(rng, req.hints);
    }
    if (task == "translate") return str_hint(req.hints, "text");
    if (task == "rewrite" || (task.empty() && req.stage == Stage::kRewrite)) {
      return "Put plainly: " + str_hint(req.hints, "text");
    }
    return fill_statements(rng, Json{{"n_colloquial", 1}}, "generic distress");
  }

  std::uint64_t seed_;
  std::map<std::string, std::string> fixtures_;
  int fail_first_;
  std::atomic<std::uint64_t> attempts_{0};
  std::mutex mu_;
  std::map<std::string, std::size_t> calls_;
};

}  // namespace

std::unique_ptr<Backend> make_mock_backend(const ProviderConfig& cfg) {
  return std::make_unique<MockBackend>(cfg);
}

}  // namespace synsym::llm
