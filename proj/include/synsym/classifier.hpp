#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "synsym/core.hpp"
#include "synsym/json_io.hpp"
#include "synsym/llm.hpp"
#include "synsym/prompts.hpp"

namespace synsym::clf {

// ---- features -----------------------------------------------------------------

/// Lowercased runs of ASCII alphanumerics.
std::vector<std::string> tokenize(std::string_view text);

/// Sparse vector sorted by index, without zero entries.
struct FeatureVector {
  std::size_t dim = 0;
  std::vector<std::pair<std::uint32_t, double>> entries;

  double norm() const;
  double dot(const std::vector<double>& dense) const;
  bool operator==(const FeatureVector&) const = default;
};

/// Raw token counts at fnv1a64(token) & (dim - 1).
FeatureVector count_features(const std::vector<std::string>& tokens, std::size_t dim);
/// count_features scaled to unit L2 norm (zero vector for no tokens).
/// Throws InvalidArgument unless dim is a power of two.
FeatureVector featurize(const std::vector<std::string>& tokens, std::size_t dim);

// ---- linear model -------------------------------------------------------------

struct TrainHyper {
  double learning_rate = 0.05;
  int epochs = 10;
  double l2_weight = 0.01;
  int batch_size = 32;
  double threshold = 0.5;
  int dim_log2 = 18;

  std::size_t dim() const { return std::size_t{1} << dim_log2; }
  bool operator==(const TrainHyper&) const = default;
};

/// Throws InvalidArgument.
void validate(const TrainHyper& hyper);
Json to_json(const TrainHyper& hyper);
TrainHyper train_hyper_from_json(const Json& j, TrainHyper base = {});

struct LinearModel {
  LabelScheme scheme;
  std::vector<std::vector<double>> weights;  // one dense row per class, scheme order
  std::vector<double> bias;
  TrainHyper hyper;
  std::uint64_t seed = 0;
  std::vector<double> loss_history;  // mean per-class objective after each epoch

  /// All-zero weights and biases.
  static LinearModel zeros(LabelScheme scheme, TrainHyper hyper, std::uint64_t seed);

  std::size_t dim() const { return hyper.dim(); }
  /// sigmoid(w_c . x + b_c) per class, scheme order.
  std::vector<double> probabilities(const FeatureVector& x) const;
  bool operator==(const LinearModel&) const = default;
};

/// One featurized sample with a 0/1 target per class.
struct Example {
  FeatureVector x;
  std::vector<double> y;
};

std::vector<Example> make_examples(const Corpus& corpus, std::size_t dim);

/// (1/B) sum of binary cross-entropy for class `cls`, plus (l2/2) |w|^2.
double class_objective(const std::vector<double>& w, double b, const std::vector<Example>& batch,
                       std::size_t cls, double l2);

struct Gradient {
  std::vector<double> w;
  double b = 0.0;
};

/// Exact gradient of class_objective.
Gradient class_gradient(const std::vector<double>& w, double b, const std::vector<Example>& batch,
                        std::size_t cls, double l2);

/// One-vs-rest logistic regression by seeded mini-batch gradient descent.
/// Samples are ordered by id before shuffling, so the result does not depend
/// on corpus order. Throws EmptyTrainSet.
LinearModel train_linear(const Corpus& train, const TrainHyper& hyper, std::uint64_t seed);

/// Classes whose probability is strictly greater than `threshold`.
LabelSet predict(const LinearModel& model, std::string_view text, double threshold);

/// Pieces between runs of '.', '!' and '?', trimmed, empty pieces dropped.
/// A text without any terminator comes back whole.
std::vector<std::string> split_sentences(std::string_view text);

/// Union of predict() over split_sentences(text).
LabelSet predict_long(const LinearModel& model, std::string_view text, double threshold);

std::string serialize_model(const LinearModel& model);
LinearModel deserialize_model(const std::string& bytes);
void save_model(const LinearModel& model, const std::filesystem::path& path);
LinearModel load_model(const std::filesystem::path& path);

// ---- training / prediction interfaces -----------------------------------------

class Predictor {
 public:
  virtual ~Predictor() = default;
  /// Must be safe to call concurrently.
  virtual LabelSet predict(std::string_view text) const = 0;
  std::vector<LabelSet> predict_all(const std::vector<Sample>& samples) const;
};

class Trainer {
 public:
  virtual ~Trainer() = default;
  virtual std::string name() const = 0;
  virtual std::unique_ptr<Predictor> train(const Corpus& train, std::uint64_t seed) const = 0;
};

class LinearPredictor final : public Predictor {
 public:
  LinearPredictor(std::shared_ptr<const LinearModel> model, double threshold, bool sentence_aggregation)
      : model_(std::move(model)), threshold_(threshold), sentences_(sentence_aggregation) {}

  LabelSet predict(std::string_view text) const override;
  const LinearModel& model() const { return *model_; }

 private:
  std::shared_ptr<const LinearModel> model_;
  double threshold_;
  bool sentences_;
};

class LinearTrainer final : public Trainer {
 public:
  explicit LinearTrainer(TrainHyper hyper = {}, bool sentence_aggregation = false)
      : hyper_(hyper), sentences_(sentence_aggregation) {}

  std::string name() const override { return "linear"; }
  std::unique_ptr<Predictor> train(const Corpus& train, std::uint64_t seed) const override;

 private:
  TrainHyper hyper_;
  bool sentences_;
};

// ---- LLM zero-shot classification ---------------------------------------------

enum class PromptStrategy { kZsl, kCot, kPs };
std::string_view to_string(PromptStrategy strategy);
std::optional<PromptStrategy> parse_strategy(std::string_view text);

struct LlmClassification {
  LabelSet labels;
  std::vector<std::string> unknown;  // names outside the scheme, dropped
  bool failed = false;               // no usable reply after one retry
};

LlmClassification llm_classify(std::string_view text, const LabelScheme& scheme, PromptStrategy strategy,
                               llm::Gateway& gateway, const PromptLibrary& prompts = {});

class LlmPredictor final : public Predictor {
 public:
  LlmPredictor(LabelScheme scheme, PromptStrategy strategy, llm::Gateway& gateway, PromptLibrary prompts = {})
      : scheme_(std::move(scheme)), strategy_(strategy), gateway_(gateway), prompts_(std::move(prompts)) {}

  LabelSet predict(std::string_view text) const override;

 private:
  LabelScheme scheme_;
  PromptStrategy strategy_;
  llm::Gateway& gateway_;
  PromptLibrary prompts_;
};

/// Ignores its training data; every call returns an LlmPredictor.
class ZeroShotTrainer final : public Trainer {
 public:
  ZeroShotTrainer(PromptStrategy strategy, llm::Gateway& gateway, PromptLibrary prompts = {})
      : strategy_(strategy), gateway_(gateway), prompts_(std::move(prompts)) {}

  std::string name() const override { return "llm-" + std::string(to_string(strategy_)); }
  std::unique_ptr<Predictor> train(const Corpus& train, std::uint64_t seed) const override;

 private:
  PromptStrategy strategy_;
  llm::Gateway& gateway_;
  PromptLibrary prompts_;
};

}  // namespace synsym::clf
