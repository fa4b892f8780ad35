#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "synsym/core.hpp"
#include "synsym/json_io.hpp"
#include "synsym/llm.hpp"
#include "synsym/prompts.hpp"

namespace synsym::data {

// ---- JSONL ------------------------------------------------------------------

enum class LoadMode { kStrict, kLenient };

struct LoadIssue {
  std::size_t line = 0;  // 1-based
  std::string message;
};

struct LoadResult {
  Corpus corpus;
  std::vector<LoadIssue> dropped;  // lenient mode only
};

/// Strict mode throws SchemaViolation naming the first bad line. Lenient mode
/// drops bad rows, logs them to stderr and lists them in `dropped`.
LoadResult parse_jsonl(const std::string& content, const LabelScheme& scheme, LoadMode mode);
LoadResult load_jsonl(const std::filesystem::path& path, const LabelScheme& scheme, LoadMode mode);

std::string to_jsonl(const Corpus& corpus);
void save_jsonl(const Corpus& corpus, const std::filesystem::path& path);

// ---- label remapping ----------------------------------------------------------

inline constexpr std::string_view kExcluded = "EXCLUDED";

struct RemapEntry {
  std::string from;
  std::optional<std::string> to;  // nullopt = excluded
  std::vector<std::string> aliases;

  bool operator==(const RemapEntry&) const = default;
};

/// Ordered source->target class map. An entry matches its `from` name or any
/// alias, so the table can be applied to schemes that spell classes differently.
class RemapTable {
 public:
  explicit RemapTable(std::vector<RemapEntry> entries);

  /// The shipped DSM5-14 -> PHQ9-9 table.
  static RemapTable dsm5_to_phq9();
  static RemapTable identity(const LabelScheme& scheme);
  /// "default" or a JSON file path.
  static RemapTable load(const std::string& ref);
  static RemapTable from_json(const Json& j);
  Json to_json() const;

  const std::vector<RemapEntry>& entries() const { return entries_; }

  /// nullopt when `label` matches no entry; otherwise the target (itself
  /// nullopt when excluded).
  std::optional<std::optional<std::string>> lookup(std::string_view label) const;

  /// Throws SchemeMismatch unless every source class has an entry and every
  /// target lies in `target`.
  void check(const LabelScheme& source, const LabelScheme& target) const;

 private:
  std::vector<RemapEntry> entries_;
  std::map<std::string, std::size_t, std::less<>> by_name_;
};

/// Throws UnknownSourceLabel for a label the table does not cover.
LabelSet remap_labels(const LabelSet& labels, const RemapTable& table);

struct RemapStats {
  std::size_t emptied = 0;     // synthetic rows whose labels were all excluded (dropped)
  std::size_t duplicates = 0;  // rows that collapsed onto an existing id (dropped)
};

/// Remaps every sample into `target`. Ids are recomputed from the new labels.
Corpus remap_corpus(const Corpus& corpus, const RemapTable& table, const LabelScheme& target,
                    RemapStats* stats = nullptr);

/// Concatenates corpora that share a scheme; later duplicates are dropped.
/// Throws SchemeMismatch otherwise.
Corpus concat_corpora(const std::vector<Corpus>& corpora);

// ---- statistics -------------------------------------------------------------

struct CorpusStats {
  std::size_t n_samples = 0;
  std::size_t n_classes = 0;
  double avg_post_length = 0.0;  // whitespace-separated words
  double avg_symptoms_per_sample = 0.0;
  double avg_samples_per_class = 0.0;
  std::size_t max_samples_per_class = 0;
  std::size_t min_samples_per_class = 0;
  std::vector<std::pair<std::string, std::size_t>> per_class;  // scheme order
};

/// Throws EmptyCorpus.
CorpusStats compute_stats(const Corpus& corpus);
Json to_json(const CorpusStats& stats);
std::string format_stats_table(const CorpusStats& stats);

std::size_t whitespace_word_count(std::string_view text);

// ---- splits -------------------------------------------------------------------

struct SplitPlan {
  std::vector<std::vector<std::string>> folds;  // sample ids
  std::uint64_t seed = 0;
  std::string strategy = "shuffle-round-robin";
};

/// Sorts ids, shuffles them with `seed`, deals them round-robin into k folds.
/// Membership depends only on the id set, k and seed. Throws TooFewSamples when n < k.
SplitPlan kfold_split(const Corpus& corpus, int k, std::uint64_t seed);

/// (train, test) for fold `fold`; both keep the corpus order.
std::pair<Corpus, Corpus> fold_partition(const Corpus& corpus, const SplitPlan& plan, std::size_t fold);

/// floor(ratio * n) samples to train, the rest to validation.
std::pair<Corpus, Corpus> train_val_split(const Corpus& corpus, double ratio, std::uint64_t seed);

// ---- figurative rewriting -----------------------------------------------------

/// Replaces the text with an LLM rewrite at temperature 0. Labels are kept,
/// source becomes "d2s-rewritten", and meta records the original text and id.
/// On an unusable reply the sample comes back unchanged with meta
/// "rewrite_failed" = "true".
Sample rewrite_figurative(const Sample& sample, llm::Gateway& gateway, const PromptLibrary& prompts = {});

/// Rewrites in parallel; output order matches input order.
std::vector<Sample> rewrite_all(const std::vector<Sample>& samples, llm::Gateway& gateway,
                                const PromptLibrary& prompts = {});

// ---- back-translation ---------------------------------------------------------

class Translator {
 public:
  virtual ~Translator() = default;
  /// Throws on failure; any error is reported as TranslationFailed by callers.
  virtual std::string translate(std::string_view text, std::string_view from, std::string_view to) = 0;
};

class IdentityTranslator final : public Translator {
 public:
  std::string translate(std::string_view text, std::string_view, std::string_view) override {
    return std::string(text);
  }
};

/// Translation through the rewrite stage of an LLM gateway.
class LlmTranslator final : public Translator {
 public:
  explicit LlmTranslator(llm::Gateway& gateway, PromptLibrary prompts = {})
      : gateway_(gateway), prompts_(std::move(prompts)) {}

  std::string translate(std::string_view text, std::string_view from, std::string_view to) override;

 private:
  llm::Gateway& gateway_;
  PromptLibrary prompts_;
};

/// en -> pivot -> en. Throws TranslationFailed.
std::string back_translate(std::string_view text, Translator& translator, std::string_view pivot = "de");

struct AugmentResult {
  Corpus corpus;
  std::size_t skipped = 0;
};

/// Originals followed by one back-translated copy per sample (source
/// "augmented", same labels). Failed samples are logged and skipped.
AugmentResult augment_with_backtranslation(const Corpus& corpus, Translator& translator,
                                           std::string_view pivot = "de");

}  // namespace synsym::data
