#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "synsym/classifier.hpp"
#include "synsym/core.hpp"
#include "synsym/dataset.hpp"
#include "synsym/json_io.hpp"
#include "synsym/llm.hpp"
#include "synsym/pipeline.hpp"

namespace synsym::eval {

// ---- metrics ------------------------------------------------------------------

struct ClassCount {
  std::string cls;
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  std::uint64_t support() const { return tp + fn; }
  std::uint64_t predicted() const { return tp + fp; }
  bool operator==(const ClassCount&) const = default;
};

/// Scheme order.
using ClassCounts = std::vector<ClassCount>;

/// Throws LengthMismatch, or SchemaViolation for a label outside the scheme.
ClassCounts confusion_counts(const std::vector<LabelSet>& preds, const std::vector<LabelSet>& golds,
                             const LabelScheme& scheme);

struct ClassMetrics {
  std::string cls;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support = 0;
  std::uint64_t predicted = 0;
  bool evaluated = true;

  bool operator==(const ClassMetrics&) const = default;
};

struct Metrics {
  std::vector<ClassMetrics> per_class;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  std::vector<std::string> evaluated;
  std::vector<std::string> excluded;  // no gold support and no predictions

  bool operator==(const Metrics&) const = default;
};

/// Throws NoEvaluableClasses when every class is excluded.
Metrics macro_metrics(const ClassCounts& counts);

/// Predicts every sample of `test` and scores against its labels.
Metrics evaluate(const clf::Predictor& predictor, const Corpus& test);

// ---- protocol -----------------------------------------------------------------

struct RunRecord {
  int fold = 0;  // -1 for a fixed split
  std::uint64_t seed = 0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  Metrics metrics;
};

struct Summary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single value

  bool operator==(const Summary&) const = default;
};

Summary summarize(const std::vector<double>& values);

struct AggregateResult {
  std::vector<RunRecord> runs;
  Summary macro_precision;
  Summary macro_recall;
  Summary macro_f1;
};

/// Summaries recomputed from `runs`.
AggregateResult aggregate(std::vector<RunRecord> runs);

inline const std::vector<std::uint64_t> kDefaultSeeds{42, 43, 44, 45, 46};

struct CvOptions {
  int k = 5;
  std::vector<std::uint64_t> seeds = kDefaultSeeds;
  std::uint64_t split_seed = 42;  // fold assignment; training uses each seed in `seeds`
  int parallelism = 1;
};

/// k folds x seeds runs in (seed, fold) order. Errors are rethrown with their
/// seed and fold.
AggregateResult run_cv(const Corpus& corpus, const CvOptions& options, const clf::Trainer& trainer);

/// One run per seed on a fixed split.
AggregateResult run_fixed_split(const Corpus& train, const Corpus& test, const std::vector<std::uint64_t>& seeds,
                                const clf::Trainer& trainer, int parallelism = 1);

// ---- cross-dataset --------------------------------------------------------------

struct NamedCorpus {
  std::string name;
  Corpus corpus;
};

struct CrossEvalOptions {
  double train_ratio = 0.8;
  std::uint64_t split_seed = 42;
  std::uint64_t train_seed = 42;
  /// Applied to every corpus whose scheme differs from `target`.
  std::optional<data::RemapTable> remap;
  std::optional<LabelScheme> target;  // defaults to the first row's scheme
};

struct CrossEvalResult {
  std::vector<std::string> rows;  // training corpora
  std::vector<std::string> cols;  // test corpora
  std::vector<std::vector<Metrics>> cells;

  bool in_domain(std::size_t row, std::size_t col) const { return rows[row] == cols[col]; }
};

/// Each corpus is split train_ratio/rest with split_seed, then remapped. Every
/// row trains once on its training part and is scored on each column's held-out
/// part. Throws SchemeMismatch when a corpus cannot be brought to the target.
CrossEvalResult cross_eval(const std::vector<NamedCorpus>& train_corpora, const std::vector<NamedCorpus>& test_corpora,
                           const clf::Trainer& trainer, const CrossEvalOptions& options = {});

// ---- ablation -----------------------------------------------------------------

struct AblationVariant {
  std::string name;
  gen::AblationFlags flags;
};

/// Full framework, then EV, CK, DU and SE removed cumulatively.
std::vector<AblationVariant> cumulative_variants();

struct AblationOptions {
  CvOptions cv;
  /// When set, each variant trains on its whole corpus and is scored on this
  /// corpus (remapped if needed) once per seed; otherwise run_cv on the variant corpus.
  std::optional<Corpus> test;
  std::optional<data::RemapTable> remap;
};

struct AblationRow {
  AblationVariant variant;
  std::size_t corpus_size = 0;
  std::uint64_t evaluation_calls = 0;
  std::uint64_t total_calls = 0;
  std::optional<AggregateResult> result;
  std::optional<std::string> error;
};

/// One pipeline run, on a fresh gateway, per variant. A failing variant is
/// recorded and the rest continue.
std::vector<AblationRow> run_ablation(const gen::PipelineConfig& base, const std::vector<AblationVariant>& variants,
                                      const llm::ProviderConfig& provider, const clf::Trainer& trainer,
                                      const AblationOptions& options = {});

// ---- reports ------------------------------------------------------------------

inline constexpr int kReportSchemaVersion = 1;

Json to_json(const Metrics& metrics);
Json to_json(const AggregateResult& result);
Json to_json(const CrossEvalResult& result);
Json to_json(const std::vector<AblationRow>& rows);

/// "0.830 ± 0.006"
std::string format_mean_std(const Summary& s);

/// Fixed-layout tables.
std::string format_aggregate_table(const std::string& model_name, const AggregateResult& result);
std::string format_cross_eval_table(const CrossEvalResult& result);
std::string format_ablation_table(const std::vector<AblationRow>& rows);

/// class,precision,recall,f1,support,runs_evaluated; means over the runs in
/// which the class was evaluated.
std::string per_class_csv(const AggregateResult& result);

}  // namespace synsym::eval
