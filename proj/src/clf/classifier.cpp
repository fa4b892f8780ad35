#include "synsym/classifier.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <iostream>
#include <numeric>

#include "synsym/errors.hpp"
#include "synsym/hashing.hpp"
#include "synsym/parsing.hpp"

namespace synsym::clf {

// ---- features -----------------------------------------------------------------

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (std::isalnum(c) != 0) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

double FeatureVector::norm() const {
  double sum = 0.0;
  for (const auto& [i, v] : entries) sum += v * v;
  return std::sqrt(sum);
}

double FeatureVector::dot(const std::vector<double>& dense) const {
  double sum = 0.0;
  for (const auto& [i, v] : entries) sum += v * dense[i];
  return sum;
}

FeatureVector count_features(const std::vector<std::string>& tokens, std::size_t dim) {
  if (dim == 0 || (dim & (dim - 1)) != 0) throw Error(Errc::kInvalidArgument, "feature dimension must be a power of two");
  std::vector<std::uint32_t> idx;
  idx.reserve(tokens.size());
  for (const auto& t : tokens) idx.push_back(static_cast<std::uint32_t>(fnv1a64(t) & (dim - 1)));
  std::sort(idx.begin(), idx.end());
  FeatureVector fv;
  fv.dim = dim;
  for (auto i : idx) {
    if (!fv.entries.empty() && fv.entries.back().first == i) {
      fv.entries.back().second += 1.0;
    } else {
      fv.entries.emplace_back(i, 1.0);
    }
  }
  return fv;
}

FeatureVector featurize(const std::vector<std::string>& tokens, std::size_t dim) {
  FeatureVector fv = count_features(tokens, dim);
  const double n = fv.norm();
  if (n > 0.0) {
    for (auto& e : fv.entries) e.second /= n;
  }
  return fv;
}

// ---- hyperparameters ----------------------------------------------------------

void validate(const TrainHyper& h) {
  if (!(h.learning_rate > 0.0) || !std::isfinite(h.learning_rate)) {
    throw Error(Errc::kInvalidArgument, "learning_rate must be positive");
  }
  if (h.epochs <= 0) throw Error(Errc::kInvalidArgument, "epochs must be positive");
  if (!(h.l2_weight > 0.0) || !std::isfinite(h.l2_weight)) {
    throw Error(Errc::kInvalidArgument, "l2_weight must be positive");
  }
  if (!(h.learning_rate * h.l2_weight < 1.0)) {
    throw Error(Errc::kInvalidArgument, "learning_rate * l2_weight must be below 1");
  }
  if (h.batch_size <= 0) throw Error(Errc::kInvalidArgument, "batch_size must be positive");
  if (!(h.threshold > 0.0 && h.threshold < 1.0)) throw Error(Errc::kInvalidArgument, "threshold must lie in (0, 1)");
  if (h.dim_log2 < 1 || h.dim_log2 > 24) throw Error(Errc::kInvalidArgument, "dim_log2 must lie in 1..24");
}

Json to_json(const TrainHyper& h) {
  return Json{{"learning_rate", h.learning_rate}, {"epochs", h.epochs},       {"l2_weight", h.l2_weight},
              {"batch_size", h.batch_size},       {"threshold", h.threshold}, {"dim_log2", h.dim_log2}};
}

TrainHyper train_hyper_from_json(const Json& j, TrainHyper h) {
  if (!j.is_object()) throw Error(Errc::kSchemaViolation, "training settings must be a JSON object");
  try {
    h.learning_rate = j.value("learning_rate", h.learning_rate);
    h.epochs = j.value("epochs", h.epochs);
    h.l2_weight = j.value("l2_weight", h.l2_weight);
    h.batch_size = j.value("batch_size", h.batch_size);
    h.threshold = j.value("threshold", h.threshold);
    h.dim_log2 = j.value("dim_log2", h.dim_log2);
  } catch (const Json::exception& e) {
    throw Error(Errc::kSchemaViolation, std::string("training settings: ") + e.what());
  }
  validate(h);
  return h;
}

// ---- model ----------------------------------------------------------------------

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double squared_norm(const std::vector<double>& w) {
  double s = 0.0;
  for (double v : w) s += v * v;
  return s;
}

}  // namespace

LinearModel LinearModel::zeros(LabelScheme scheme, TrainHyper hyper, std::uint64_t seed) {
  LinearModel m{std::move(scheme), {}, {}, hyper, seed, {}};
  m.weights.assign(m.scheme.size(), std::vector<double>(hyper.dim(), 0.0));
  m.bias.assign(m.scheme.size(), 0.0);
  return m;
}

std::vector<double> LinearModel::probabilities(const FeatureVector& x) const {
  std::vector<double> p(weights.size());
  for (std::size_t c = 0; c < weights.size(); ++c) p[c] = sigmoid(x.dot(weights[c]) + bias[c]);
  return p;
}

std::vector<Example> make_examples(const Corpus& corpus, std::size_t dim) {
  std::vector<Example> out;
  out.reserve(corpus.size());
  for (const auto& s : corpus.samples) {
    Example ex{featurize(tokenize(s.text), dim), std::vector<double>(corpus.scheme.size(), 0.0)};
    for (const auto& l : s.labels) {
      auto idx = corpus.scheme.index_of(l);
      if (!idx) throw Error(Errc::kSchemaViolation, "label '" + l + "' is not in scheme " + corpus.scheme.name());
      ex.y[*idx] = 1.0;
    }
    out.push_back(std::move(ex));
  }
  return out;
}

double class_objective(const std::vector<double>& w, double b, const std::vector<Example>& batch, std::size_t cls,
                       double l2) {
  double loss = 0.0;
  for (const auto& ex : batch) {
    const double z = ex.x.dot(w) + b;
    // -[y log s(z) + (1-y) log(1-s(z))] = softplus(z) - y z
    loss += softplus(z) - ex.y[cls] * z;
  }
  if (!batch.empty()) loss /= static_cast<double>(batch.size());
  return loss + 0.5 * l2 * squared_norm(w);
}

Gradient class_gradient(const std::vector<double>& w, double b, const std::vector<Example>& batch, std::size_t cls,
                        double l2) {
  Gradient g{std::vector<double>(w.size(), 0.0), 0.0};
  const double inv = batch.empty() ? 0.0 : 1.0 / static_cast<double>(batch.size());
  for (const auto& ex : batch) {
    const double r = (sigmoid(ex.x.dot(w) + b) - ex.y[cls]) * inv;
    for (const auto& [i, v] : ex.x.entries) g.w[i] += r * v;
    g.b += r;
  }
  for (std::size_t i = 0; i < w.size(); ++i) g.w[i] += l2 * w[i];
  return g;
}

LinearModel train_linear(const Corpus& train, const TrainHyper& hyper, std::uint64_t seed) {
  validate(hyper);
  if (train.empty()) throw Error(Errc::kEmptyTrainSet, "training corpus is empty");

  std::vector<const Sample*> ordered;
  ordered.reserve(train.size());
  for (const auto& s : train.samples) ordered.push_back(&s);
  std::stable_sort(ordered.begin(), ordered.end(), [](const Sample* a, const Sample* b) { return a->id < b->id; });
  Corpus sorted(train.scheme);
  sorted.samples.reserve(ordered.size());
  for (const Sample* s : ordered) sorted.samples.push_back(*s);

  const std::vector<Example> examples = make_examples(sorted, hyper.dim());
  LinearModel model = LinearModel::zeros(train.scheme, hyper, seed);
  const std::size_t n_classes = model.scheme.size();
  const double eta = hyper.learning_rate;
  const double decay = 1.0 - eta * hyper.l2_weight;

  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(seed, "train-shuffle"));
  std::vector<double> residual;
  // Weights are held as scale[c] * weights[c] so the L2 decay costs O(1) per step.
  std::vector<double> scale(n_classes, 1.0);
  auto fold_scale = [&](std::size_t c) {
    for (double& v : model.weights[c]) v *= scale[c];
    scale[c] = 1.0;
  };

  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(hyper.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(hyper.batch_size));
      const double inv = 1.0 / static_cast<double>(end - start);
      for (std::size_t c = 0; c < n_classes; ++c) {
        auto& w = model.weights[c];
        // Residuals use the pre-step weights for the whole batch.
        residual.assign(end - start, 0.0);
        double gb = 0.0;
        for (std::size_t k = start; k < end; ++k) {
          const Example& ex = examples[order[k]];
          residual[k - start] = (sigmoid(scale[c] * ex.x.dot(w) + model.bias[c]) - ex.y[c]) * inv;
          gb += residual[k - start];
        }
        // w <- w - eta * (g_data + l2 * w)
        scale[c] *= decay;
        if (scale[c] < 1e-100) fold_scale(c);
        for (std::size_t k = start; k < end; ++k) {
          const double step = eta * residual[k - start] / scale[c];
          for (const auto& [i, v] : examples[order[k]].x.entries) w[i] -= step * v;
        }
        model.bias[c] -= eta * gb;
      }
    }
    for (std::size_t c = 0; c < n_classes; ++c) fold_scale(c);
    double total = 0.0;
    for (std::size_t c = 0; c < n_classes; ++c) {
      total += class_objective(model.weights[c], model.bias[c], examples, c, hyper.l2_weight);
    }
    model.loss_history.push_back(total / static_cast<double>(n_classes));
  }
  return model;
}

LabelSet predict(const LinearModel& model, std::string_view text, double threshold) {
  const auto p = model.probabilities(featurize(tokenize(text), model.dim()));
  LabelSet out;
  for (std::size_t c = 0; c < p.size(); ++c) {
    if (p[c] > threshold) out.insert(model.scheme.classes()[c]);
  }
  return out;
}

std::vector<std::string> split_sentences(std::string_view text) {
  auto is_term = [](char c) { return c == '.' || c == '!' || c == '?'; };
  if (std::none_of(text.begin(), text.end(), is_term)) return {std::string(text)};
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || is_term(text[i])) {
      std::string piece = trim(text.substr(start, i - start));
      if (!piece.empty()) out.push_back(std::move(piece));
      start = i + 1;
    }
  }
  if (out.empty()) out.push_back(trim(text));
  return out;
}

LabelSet predict_long(const LinearModel& model, std::string_view text, double threshold) {
  LabelSet out;
  for (const auto& sentence : split_sentences(text)) {
    auto labels = predict(model, sentence, threshold);
    out.insert(labels.begin(), labels.end());
  }
  return out;
}

// ---- model files ----------------------------------------------------------------

namespace {

constexpr std::string_view kMagic = "SYNSYMLM";
constexpr std::uint32_t kModelVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, sizeof bits);
  put_u64(out, bits);
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  std::uint64_t uint(int width) {
    need(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= std::uint64_t{static_cast<unsigned char>(bytes_[pos_ + i])} << (8 * i);
    pos_ += static_cast<std::size_t>(width);
    return v;
  }

  double f64() {
    const std::uint64_t bits = uint(8);
    double d;
    std::memcpy(&d, &bits, sizeof d);
    return d;
  }

  std::string take(std::size_t n) {
    need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw Error(Errc::kSchemaViolation, "model file is truncated");
  }

  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string serialize_model(const LinearModel& m) {
  Json header{{"scheme", to_json(m.scheme)},
              {"hyper", to_json(m.hyper)},
              {"seed", m.seed},
              {"dim", m.dim()},
              {"loss_history", m.loss_history}};
  const std::string head = header.dump();
  std::string out(kMagic);
  put_u32(out, kModelVersion);
  put_u64(out, head.size());
  out += head;
  put_u32(out, static_cast<std::uint32_t>(m.weights.size()));
  for (std::size_t c = 0; c < m.weights.size(); ++c) {
    put_f64(out, m.bias[c]);
    const auto& w = m.weights[c];
    const auto nnz = static_cast<std::uint64_t>(std::count_if(w.begin(), w.end(), [](double v) { return v != 0.0; }));
    put_u64(out, nnz);
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] == 0.0) continue;
      put_u32(out, static_cast<std::uint32_t>(i));
      put_f64(out, w[i]);
    }
  }
  return out;
}

LinearModel deserialize_model(const std::string& bytes) {
  Reader in(bytes);
  if (in.take(kMagic.size()) != kMagic) throw Error(Errc::kSchemaViolation, "not a synsym model file");
  const auto version = in.uint(4);
  if (version != kModelVersion) {
    throw Error(Errc::kSchemaViolation, "unsupported model file version " + std::to_string(version));
  }
  Json header;
  try {
    header = Json::parse(in.take(in.uint(8)));
  } catch (const Json::exception& e) {
    throw Error(Errc::kSchemaViolation, std::string("model header: ") + e.what());
  }
  LinearModel m = LinearModel::zeros(scheme_from_json(header.at("scheme")),
                                     train_hyper_from_json(header.at("hyper")), header.at("seed").get<std::uint64_t>());
  if (header.at("dim").get<std::size_t>() != m.dim()) throw Error(Errc::kSchemaViolation, "model dimension mismatch");
  m.loss_history = header.at("loss_history").get<std::vector<double>>();
  if (in.uint(4) != m.scheme.size()) throw Error(Errc::kSchemaViolation, "model class count mismatch");
  for (std::size_t c = 0; c < m.scheme.size(); ++c) {
    m.bias[c] = in.f64();
    const auto nnz = in.uint(8);
    for (std::uint64_t k = 0; k < nnz; ++k) {
      const auto i = in.uint(4);
      if (i >= m.dim()) throw Error(Errc::kSchemaViolation, "model weight index out of range");
      m.weights[c][i] = in.f64();
    }
  }
  if (!in.done()) throw Error(Errc::kSchemaViolation, "trailing bytes in model file");
  return m;
}

void save_model(const LinearModel& model, const std::filesystem::path& path) {
  write_file(path, serialize_model(model));
}

LinearModel load_model(const std::filesystem::path& path) { return deserialize_model(read_file(path)); }

// ---- interfaces -----------------------------------------------------------------

std::vector<LabelSet> Predictor::predict_all(const std::vector<Sample>& samples) const {
  std::vector<LabelSet> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(predict(s.text));
  return out;
}

LabelSet LinearPredictor::predict(std::string_view text) const {
  return sentences_ ? predict_long(*model_, text, threshold_) : clf::predict(*model_, text, threshold_);
}

std::unique_ptr<Predictor> LinearTrainer::train(const Corpus& train, std::uint64_t seed) const {
  auto model = std::make_shared<const LinearModel>(train_linear(train, hyper_, seed));
  return std::make_unique<LinearPredictor>(std::move(model), hyper_.threshold, sentences_);
}

// ---- LLM classification -----------------------------------------------------------

std::string_view to_string(PromptStrategy s) {
  switch (s) {
    case PromptStrategy::kZsl: return "zsl";
    case PromptStrategy::kCot: return "cot";
    case PromptStrategy::kPs: return "ps";
  }
  return "zsl";
}

std::optional<PromptStrategy> parse_strategy(std::string_view text) {
  std::string t = trim(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (t == "zsl") return PromptStrategy::kZsl;
  if (t == "cot") return PromptStrategy::kCot;
  if (t == "ps") return PromptStrategy::kPs;
  return std::nullopt;
}

LlmClassification llm_classify(std::string_view text, const LabelScheme& scheme, PromptStrategy strategy,
                               llm::Gateway& gateway, const PromptLibrary& prompts) {
  std::string symptom_list;
  for (const auto& c : scheme.classes()) symptom_list += "- " + c + "\n";
  const std::string name(to_string(strategy));
  auto req = llm::GenRequest::make(
      llm::Stage::kClassify, prompts.render("classify.system", {}),
      prompts.render("classify." + name + ".user", {{"symptom_list", trim(symptom_list)}, {"text", std::string(text)}}));
  req.fixture_key = "classify:" + name + ":" + to_hex16(fnv1a64(text));
  req.hints = Json{{"task", "classify"}, {"strategy", name}, {"classes", scheme.classes()}};

  LlmClassification result;
  for (int attempt = 0; attempt < 2; ++attempt) {
    try {
      auto parsed = parse_label_line(gateway.complete(req).text, scheme);
      if (!parsed.found) continue;
      result.labels = std::move(parsed.labels);
      result.unknown = std::move(parsed.unknown);
      for (const auto& u : result.unknown) std::cerr << "synsym: dropped unknown label '" << u << "'\n";
      return result;
    } catch (const Error& e) {
      if (e.code() != Errc::kMalformedReply && e.code() != Errc::kProviderExhausted) throw;
    }
  }
  std::cerr << "synsym: no usable classification reply for " << req.fixture_key << '\n';
  result.failed = true;
  return result;
}

LabelSet LlmPredictor::predict(std::string_view text) const {
  return llm_classify(text, scheme_, strategy_, gateway_, prompts_).labels;
}

std::unique_ptr<Predictor> ZeroShotTrainer::train(const Corpus& train, std::uint64_t) const {
  return std::make_unique<LlmPredictor>(train.scheme, strategy_, gateway_, prompts_);
}

}  // namespace synsym::clf
