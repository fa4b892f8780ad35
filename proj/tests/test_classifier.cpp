#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "synsym/classifier.hpp"
#include "synsym/errors.hpp"
#include "synsym/evaluator.hpp"

using namespace synsym;
using namespace synsym::clf;

namespace {

TrainHyper small_hyper() {
  TrainHyper h;
  h.dim_log2 = 12;
  return h;
}

double f1_on(const LinearModel& m, const Corpus& c) {
  LinearPredictor p(std::make_shared<const LinearModel>(m), m.hyper.threshold, false);
  return eval::evaluate(p, c).macro_f1;
}

std::string random_text(Rng& rng, int sentences) {
  static const std::vector<std::string> words{"alpha", "beta", "apple", "banana", "bridge", "anchor", "sky", "sea"};
  static const std::vector<std::string> ends{".", "!", "?", ". "};
  std::string t;
  for (int s = 0; s < sentences; ++s) {
    const int n = 1 + static_cast<int>(rng.below(5));
    for (int w = 0; w < n; ++w) t += (w ? " " : "") + words[rng.below(words.size())];
    t += ends[rng.below(ends.size())];
    if (rng.below(2)) t += " ";
  }
  return t;
}

}  // namespace

TEST_SUITE("classifier") {
  TEST_CASE("tokenize lowercases and splits on non-alphanumerics") {
    CHECK(tokenize("I can't SLEEP, at all!!") == std::vector<std::string>{"i", "can", "t", "sleep", "at", "all"});
    CHECK(tokenize("  ...  ").empty());
    CHECK(tokenize("abc123 x9") == std::vector<std::string>{"abc123", "x9"});
  }

  TEST_CASE("features are hashed and L2-normalized") {
    const auto x = featurize(tokenize("a b b c"), 1024);
    CHECK(x.norm() == doctest::Approx(1.0));
    for (std::size_t i = 1; i < x.entries.size(); ++i) CHECK(x.entries[i - 1].first < x.entries[i].first);
    const auto raw = count_features(tokenize("a b b c"), 1024);
    double total = 0;
    for (const auto& [idx, v] : raw.entries) total += v;
    CHECK(total == 4.0);
    CHECK(featurize({}, 1024).entries.empty());
    CHECK_THROWS_AS(count_features({"a"}, 1000), Error);
  }

  TEST_CASE("hyperparameter defaults and validation") {
    const TrainHyper h;
    CHECK(h.learning_rate == 0.05);
    CHECK(h.epochs == 10);
    CHECK(h.l2_weight == 0.01);
    CHECK(h.batch_size == 32);
    CHECK(h.threshold == 0.5);
    CHECK(train_hyper_from_json(to_json(h)) == h);
    TrainHyper bad = h;
    bad.epochs = 0;
    CHECK_THROWS_AS(validate(bad), Error);
    bad = h;
    bad.dim_log2 = 30;
    CHECK_THROWS_AS(validate(bad), Error);
  }

  TEST_CASE("analytic gradient matches finite differences") {
    const auto corpus = testing::toy_separable(6, 3);
    const std::size_t dim = 16;
    const auto batch = make_examples(corpus, dim);
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> w(dim);
      for (auto& v : w) v = u(gen);
      const double b = u(gen);
      for (std::size_t cls = 0; cls < 2; ++cls) {
        const auto g = class_gradient(w, b, batch, cls, 0.1);
        const double h = 1e-6;
        for (std::size_t i = 0; i < dim; ++i) {
          auto wp = w, wm = w;
          wp[i] += h;
          wm[i] -= h;
          const double fd = (class_objective(wp, b, batch, cls, 0.1) - class_objective(wm, b, batch, cls, 0.1)) / (2 * h);
          CHECK(std::abs(fd - g.w[i]) / std::max({std::abs(fd), std::abs(g.w[i]), 1e-8}) < 1e-4);
        }
        const double fdb =
            (class_objective(w, b + h, batch, cls, 0.1) - class_objective(w, b - h, batch, cls, 0.1)) / (2 * h);
        CHECK(std::abs(fdb - g.b) / std::max({std::abs(fdb), std::abs(g.b), 1e-8}) < 1e-4);
      }
    }
  }

  TEST_CASE("separable toy data reaches F1 1.0 within ten epochs") {
    const auto corpus = testing::toy_separable(10, 5);
    auto hyper = small_hyper();
    hyper.epochs = 10;
    const auto model = train_linear(corpus, hyper, 42);
    CHECK(f1_on(model, corpus) == 1.0);
  }

  TEST_CASE("training matches a dense reference implementation") {
    auto corpus = testing::toy_separable(12, 6);
    auto hyper = small_hyper();
    hyper.dim_log2 = 8;
    hyper.batch_size = 5;
    hyper.epochs = 4;
    hyper.learning_rate = 0.3;
    hyper.l2_weight = 0.2;
    const auto model = train_linear(corpus, hyper, 17);

    std::stable_sort(corpus.samples.begin(), corpus.samples.end(),
                     [](const Sample& a, const Sample& b) { return a.id < b.id; });
    const auto ex = make_examples(corpus, hyper.dim());
    std::vector<std::vector<double>> w(2, std::vector<double>(hyper.dim(), 0.0));
    std::vector<double> b(2, 0.0);
    std::vector<std::size_t> order(ex.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(17, "train-shuffle"));
    for (int e = 0; e < hyper.epochs; ++e) {
      rng.shuffle(order);
      for (std::size_t start = 0; start < order.size(); start += hyper.batch_size) {
        std::vector<Example> batch;
        for (std::size_t k = start; k < std::min(order.size(), start + hyper.batch_size); ++k) batch.push_back(ex[order[k]]);
        for (std::size_t c = 0; c < 2; ++c) {
          const auto g = class_gradient(w[c], b[c], batch, c, hyper.l2_weight);
          for (std::size_t i = 0; i < w[c].size(); ++i) w[c][i] -= hyper.learning_rate * g.w[i];
          b[c] -= hyper.learning_rate * g.b;
        }
      }
    }
    for (std::size_t c = 0; c < 2; ++c) {
      CHECK(model.bias[c] == doctest::Approx(b[c]).epsilon(1e-9));
      for (std::size_t i = 0; i < w[c].size(); ++i) CHECK(model.weights[c][i] == doctest::Approx(w[c][i]).epsilon(1e-9));
    }
  }

  TEST_CASE("training loss does not increase on the toy set") {
    auto hyper = small_hyper();
    hyper.batch_size = 1000;
    hyper.learning_rate = 0.5;
    const auto model = train_linear(testing::toy_separable(10, 5), hyper, 1);
    REQUIRE(model.loss_history.size() == 10);
    for (std::size_t i = 1; i < model.loss_history.size(); ++i) {
      CHECK(model.loss_history[i] <= model.loss_history[i - 1] + 1e-12);
    }
  }

  TEST_CASE("training is deterministic and order independent") {
    auto corpus = testing::toy_separable(15, 2);
    const auto a = train_linear(corpus, small_hyper(), 42);
    std::reverse(corpus.samples.begin(), corpus.samples.end());
    const auto b = train_linear(corpus, small_hyper(), 42);
    CHECK(serialize_model(a) == serialize_model(b));
    CHECK_FALSE(serialize_model(train_linear(corpus, small_hyper(), 43)) == serialize_model(a));
    CHECK_THROWS_AS(train_linear(Corpus(testing::toy_scheme()), small_hyper(), 1), Error);
  }

  TEST_CASE("zero model predicts nothing") {
    const auto m = LinearModel::zeros(testing::toy_scheme(), small_hyper(), 0);
    CHECK(predict(m, "alpha beta", 0.5).empty());
    CHECK(predict(m, "alpha beta", 0.4).size() == 2);
  }

  TEST_CASE("raising the threshold only removes labels") {
    const auto corpus = testing::toy_separable(10, 9);
    auto hyper = small_hyper();
    hyper.learning_rate = 0.5;
    const auto m = train_linear(corpus, hyper, 3);
    for (const auto& s : corpus.samples) {
      LabelSet prev = predict(m, s.text, 0.0);
      for (double t : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
        const auto cur = predict(m, s.text, t);
        CHECK(std::includes(prev.begin(), prev.end(), cur.begin(), cur.end()));
        prev = cur;
      }
      CHECK(prev.empty());
    }
  }

  TEST_CASE("sentence splitting") {
    CHECK(split_sentences("One. Two! Three?") == std::vector<std::string>{"One", "Two", "Three"});
    CHECK(split_sentences("no terminator") == std::vector<std::string>{"no terminator"});
    CHECK(split_sentences("  ...  ") == std::vector<std::string>{"..."});
  }

  TEST_CASE("long-text prediction is the union over sentences") {
    auto hyper = small_hyper();
    hyper.learning_rate = 0.5;
    const auto m = train_linear(testing::toy_separable(10, 4), hyper, 8);
    Rng rng(99);
    for (int i = 0; i < 100; ++i) {
      const auto text = random_text(rng, 1 + static_cast<int>(rng.below(4)));
      LabelSet expected;
      for (const auto& s : split_sentences(text)) {
        const auto p = predict(m, s, 0.5);
        expected.insert(p.begin(), p.end());
      }
      CHECK(predict_long(m, text, 0.5) == expected);
    }
  }

  TEST_CASE("model files round-trip and reject corruption") {
    const auto m = train_linear(testing::toy_separable(5, 1), small_hyper(), 4);
    const auto bytes = serialize_model(m);
    CHECK(bytes.substr(0, 8) == "SYNSYMLM");
    const auto back = deserialize_model(bytes);
    CHECK(back == m);
    testing::TempDir dir;
    save_model(m, dir / "m.bin");
    CHECK(load_model(dir / "m.bin") == m);
    CHECK_THROWS_AS(deserialize_model(bytes.substr(0, bytes.size() - 3)), Error);
    auto bad = bytes;
    bad[0] = 'X';
    CHECK_THROWS_AS(deserialize_model(bad), Error);
    CHECK_THROWS_AS(deserialize_model(bytes + "x"), Error);
  }

  TEST_CASE("llm classification parses label lines") {
    const auto scheme = testing::toy_scheme();
    const auto key = [](const std::string& text) { return "classify:zsl:" + to_hex16(fnv1a64(text)); };
    llm::Gateway gw(llm::mock_provider(1, {{key("t1"), "reasoning\nLabels: A; B"},
                                           {key("t2"), "Labels: A; Happiness"},
                                           {key("t3"), "Labels: none"},
                                           {key("t4"), "I am not sure."}}));
    CHECK(llm_classify("t1", scheme, PromptStrategy::kZsl, gw).labels == LabelSet{"A", "B"});
    const auto r2 = llm_classify("t2", scheme, PromptStrategy::kZsl, gw);
    CHECK(r2.labels == LabelSet{"A"});
    CHECK(r2.unknown == std::vector<std::string>{"Happiness"});
    const auto r3 = llm_classify("t3", scheme, PromptStrategy::kZsl, gw);
    CHECK(r3.labels.empty());
    CHECK_FALSE(r3.failed);
    const auto before = gw.requests(llm::Stage::kClassify);
    const auto r4 = llm_classify("t4", scheme, PromptStrategy::kZsl, gw);
    CHECK(r4.failed);
    CHECK(gw.requests(llm::Stage::kClassify) - before == 2);
  }

  TEST_CASE("zero-shot predictors use the mock deterministically") {
    llm::Gateway gw(llm::mock_provider(5));
    ZeroShotTrainer trainer(PromptStrategy::kCot, gw);
    CHECK(trainer.name() == "llm-cot");
    const auto corpus = testing::toy_separable(3);
    const auto p = trainer.train(corpus, 0);
    const auto a = p->predict_all(corpus.samples);
    const auto b = p->predict_all(corpus.samples);
    CHECK(a == b);
    for (const auto& labels : a) {
      for (const auto& l : labels) CHECK(corpus.scheme.contains(l));
    }
    CHECK(parse_strategy(" PS ") == PromptStrategy::kPs);
    CHECK_FALSE(parse_strategy("few-shot").has_value());
  }
}
