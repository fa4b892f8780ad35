// Acceptance runner: one PASS/FAIL line per criterion, non-zero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "synsym/classifier.hpp"
#include "synsym/dataset.hpp"
#include "synsym/errors.hpp"
#include "synsym/evaluator.hpp"
#include "synsym/hashing.hpp"
#include "synsym/pipeline.hpp"

using namespace synsym;
namespace fs = std::filesystem;

namespace {

struct Failure {
  std::string what;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("synsym-acceptance-" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

SymptomSpec curated(const std::string& keyword, int n) {
  SymptomSpec spec{keyword, "About " + keyword, {}};
  for (int i = 0; i < n; ++i) spec.sub_concepts.push_back({keyword + " facet " + std::to_string(i), keyword});
  return spec;
}

std::vector<SymptomSpec> all_symptoms(const LabelScheme& scheme, int subs) {
  std::vector<SymptomSpec> out;
  for (const auto& cls : scheme.classes()) out.push_back(curated(cls, subs));
  return out;
}

// ---- criteria ----------------------------------------------------------------

void fanout() {
  gen::PipelineConfig cfg;
  cfg.symptoms = {curated("Depressed Mood", 3), curated("Sleep Disturbance", 3)};
  cfg.min_subconcepts = 3;
  cfg.combination_target = 0;
  llm::Gateway gw(llm::mock_provider(1, {{"score", "Score: 5"}}));
  const auto t0 = std::chrono::steady_clock::now();
  const auto run = gen::run_pipeline(cfg, gw);
  const double elapsed = seconds_since(t0);
  expect(!run.failure, "pipeline failed");
  std::size_t singles = 0, clinical = 0, colloquial = 0;
  for (const auto& e : run.expressions) {
    if (e.provenance.combination_id) continue;
    ++singles;
    (e.style == Style::kClinical ? clinical : colloquial)++;
  }
  expect(singles == 300, "expected 300 single expressions, got " + std::to_string(singles));
  expect(clinical == 150 && colloquial == 150,
         "style split " + std::to_string(clinical) + "/" + std::to_string(colloquial));
  expect(elapsed < 10.0, "took " + std::to_string(elapsed) + " s");
}

void quality_gate() {
  gen::PipelineConfig cfg;
  cfg.symptoms = {curated("Pessimism", 2)};
  cfg.min_subconcepts = 2;
  cfg.combination_target = 0;
  std::map<std::string, std::string> fixtures;
  for (int i = 1; i <= 100; ++i) fixtures["score@" + std::to_string(i)] = i <= 37 ? "Score: " + std::to_string(1 + i % 2) : "Score: " + std::to_string(3 + i % 3);
  llm::Gateway gw(llm::mock_provider(2, fixtures));
  const auto run = gen::run_pipeline(cfg, gw);
  expect(!run.failure, "pipeline failed");
  expect(run.expressions.size() == 100, "expected 100 expressions, got " + std::to_string(run.expressions.size()));
  const auto& ev = run.report.stages.at("evaluation");
  expect(ev.dropped_by_filter == 37, "dropped " + std::to_string(ev.dropped_by_filter));
  const auto retained = run.corpus.size() + run.report.duplicate_samples;
  expect(retained == 63, "retained " + std::to_string(retained));
  std::vector<Expression> scored = run.expressions;
  expect(gen::filter_by_score(scored, 2, true).retained.size() == 63, "filter_by_score did not keep 63");

  cfg.flags.use_ev = false;
  llm::Gateway plain(llm::mock_provider(2, fixtures));
  const auto no_ev = gen::run_pipeline(cfg, plain);
  expect(!no_ev.failure, "pipeline without EV failed");
  expect(no_ev.corpus.size() + no_ev.report.duplicate_samples == 100, "without EV not all 100 retained");
  expect(plain.requests(llm::Stage::kEvaluation) == 0, "evaluation calls issued without EV");
}

void combinations() {
  gen::PipelineConfig cfg;
  cfg.symptoms = all_symptoms(cfg.scheme, 2);
  cfg.min_subconcepts = 2;
  cfg.single_batches_per_subconcept = 1;
  cfg.combination_target = 1000;
  llm::Gateway gw(llm::mock_provider(3));
  const auto run = gen::run_pipeline(cfg, gw);
  expect(!run.failure, "pipeline failed");
  expect(run.combinations.size() == 1000, "got " + std::to_string(run.combinations.size()) + " combinations");
  std::map<std::string, const Combination*> by_id;
  for (const auto& c : run.combinations) {
    expect(c.size() >= 2 && c.size() <= 5, "combination of size " + std::to_string(c.size()));
    expect(by_id.emplace(c.id(), &c).second, "duplicate combination " + c.id());
  }
  std::size_t multi = 0;
  for (const auto& e : run.expressions) {
    if (!e.provenance.combination_id) continue;
    ++multi;
    auto it = by_id.find(*e.provenance.combination_id);
    expect(it != by_id.end(), "expression refers to an unknown combination");
    LabelSet members;
    for (const auto& m : it->second->members()) members.insert(m.symptom);
    expect(e.labels == members, "multi-symptom labels differ from combination members");
  }
  expect(multi > 0, "no multi-symptom expressions");
}

void remap_golden() {
  const auto table = data::RemapTable::dsm5_to_phq9();
  table.check(LabelScheme::dsm5_14(), LabelScheme::phq9_9());
  const std::vector<std::pair<std::string, std::string>> golden{
      {"Anger Irritability", ""},
      {"Decreased Energy, Tiredness, Fatigue", "Lack of Energy"},
      {"Depressed Mood", "Feeling Down"},
      {"Genitourinary Symptoms", "Lack of Interest"},
      {"Hyperactivity Agitation", "Hyper/Lower Activity"},
      {"Inattention", "Concentration Problems"},
      {"Indecisiveness", "Concentration Problems"},
      {"Suicidal Ideas", "Suicidal Ideation"},
      {"Worthlessness and Guilt", "Low Self-Esteem"},
      {"Loss of Interest or Motivation", "Lack of Interest"},
      {"Pessimism", "Feeling Down"},
      {"Poor Memory", "Concentration Problems"},
      {"Sleep Disturbance", "Sleep Disturbance"},
      {"Weight and Appetite Change", "Appetite Change"},
  };
  expect(golden.size() == LabelScheme::dsm5_14().size(), "golden does not cover the scheme");
  for (const auto& [from, to] : golden) {
    const auto got = data::remap_labels({from}, table);
    const LabelSet want = to.empty() ? LabelSet{} : LabelSet{to};
    expect(got == want, "remap of '" + from + "'");
  }
}

void metrics_oracle() {
  const LabelScheme scheme("ABCD", {"A", "B", "C", "D"});
  std::mt19937_64 gen(77);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(gen() % 15);
    std::vector<LabelSet> preds(n), golds(n);
    for (int i = 0; i < n; ++i) {
      for (const auto& c : scheme.classes()) {
        if (gen() % 3 == 0) preds[i].insert(c);
        if (gen() % 3 == 0) golds[i].insert(c);
      }
    }
    double sp = 0, sr = 0, sf = 0;
    int evaluated = 0;
    for (const auto& c : scheme.classes()) {
      int tp = 0, fp = 0, fn = 0;
      for (int i = 0; i < n; ++i) {
        const bool p = preds[i].count(c), g = golds[i].count(c);
        tp += p && g;
        fp += p && !g;
        fn += !p && g;
      }
      if (tp + fn == 0 && tp + fp == 0) continue;
      const double prec = tp + fp ? double(tp) / (tp + fp) : 0.0;
      const double rec = tp + fn ? double(tp) / (tp + fn) : 0.0;
      sp += prec;
      sr += rec;
      sf += prec + rec > 0 ? 2 * prec * rec / (prec + rec) : 0.0;
      ++evaluated;
    }
    const auto counts = eval::confusion_counts(preds, golds, scheme);
    if (evaluated == 0) continue;
    const auto m = eval::macro_metrics(counts);
    expect(m.macro_precision == sp / evaluated && m.macro_recall == sr / evaluated && m.macro_f1 == sf / evaluated,
           "trial " + std::to_string(trial) + " disagrees with brute force");
  }
  const auto hand = eval::macro_metrics({{"A", 1, 0, 1}, {"B", 2, 2, 0}});
  expect(std::abs(hand.macro_f1 - 2.0 / 3.0) < 1e-12, "hand example macro-F1");
  expect(std::abs(hand.macro_recall - 0.75) < 1e-12, "hand example macro-recall");
}

Corpus mock_corpus(std::size_t n, std::uint64_t seed) {
  gen::PipelineConfig cfg;
  cfg.symptoms = all_symptoms(cfg.scheme, 2);
  cfg.min_subconcepts = 2;
  cfg.single_batches_per_subconcept = 5;
  cfg.combination_target = 600;
  cfg.seed = seed;
  llm::Gateway gw(llm::mock_provider(seed));
  auto run = gen::run_pipeline(cfg, gw);
  if (run.failure) throw *run.failure;
  expect(run.corpus.size() >= n, "mock corpus too small: " + std::to_string(run.corpus.size()));
  run.corpus.samples.resize(n);
  return run.corpus;
}

Corpus separable_toy() {
  Corpus c(LabelScheme("TOY-2", {"A", "B"}));
  const std::vector<std::string> va{"alpha", "apple", "anchor", "amber", "arrow"};
  const std::vector<std::string> vb{"beta", "banana", "bridge", "bronze", "bubble"};
  Rng rng(4);
  for (int i = 0; i < 10; ++i) {
    for (const auto* v : {&va, &vb}) {
      std::string t;
      for (int w = 0; w < 4; ++w) t += (w ? " " : "") + (*v)[rng.below(v->size())];
      t += " " + std::to_string(i);
      c.samples.push_back(make_sample(t, {v == &va ? "A" : "B"}, "real", "TOY-2"));
    }
  }
  return c;
}

void trainer() {
  // Gradient check.
  const auto toy = separable_toy();
  const auto batch = clf::make_examples(toy, 32);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-1, 1);
  double worst = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<double> w(32);
    for (auto& v : w) v = u(gen);
    const double b = u(gen);
    for (std::size_t c = 0; c < 2; ++c) {
      const auto g = clf::class_gradient(w, b, batch, c, 0.01);
      for (std::size_t i = 0; i <= w.size(); ++i) {
        const double h = 1e-6;
        auto f = [&](double d) {
          auto w2 = w;
          double b2 = b;
          (i < w.size() ? w2[i] : b2) += d;
          return clf::class_objective(w2, b2, batch, c, 0.01);
        };
        const double fd = (f(h) - f(-h)) / (2 * h);
        const double an = i < w.size() ? g.w[i] : g.b;
        worst = std::max(worst, std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1e-8}));
      }
    }
  }
  expect(worst < 1e-4, "gradient relative error " + std::to_string(worst));

  // Separable data within ten epochs.
  clf::TrainHyper hyper;
  hyper.epochs = 10;
  const auto model = clf::train_linear(toy, hyper, 42);
  clf::LinearPredictor pred(std::make_shared<const clf::LinearModel>(model), hyper.threshold, false);
  const double f1 = eval::evaluate(pred, toy).macro_f1;
  expect(f1 == 1.0, "toy macro-F1 " + std::to_string(f1));

  // Determinism and scale.
  const auto corpus = mock_corpus(2000, 9);
  expect(corpus.scheme.size() == 14, "expected 14 classes");
  const auto t0 = std::chrono::steady_clock::now();
  const auto m1 = clf::train_linear(corpus, clf::TrainHyper{}, 42);
  const double elapsed = seconds_since(t0);
  const auto m2 = clf::train_linear(corpus, clf::TrainHyper{}, 42);
  const auto p1 = scratch_dir() / "m1.bin", p2 = scratch_dir() / "m2.bin";
  clf::save_model(m1, p1);
  clf::save_model(m2, p2);
  expect(slurp(p1) == slurp(p2), "model files differ");
  expect(elapsed < 60.0, "training took " + std::to_string(elapsed) + " s");
}

void cross_validation() {
  const auto corpus = mock_corpus(600, 12);
  eval::CvOptions opts;
  opts.k = 5;
  opts.seeds = {42, 43, 44, 45, 46};
  const auto r = eval::run_cv(corpus, opts, clf::LinearTrainer{});
  expect(r.runs.size() == 25, "run count " + std::to_string(r.runs.size()));
  std::vector<double> p, rec, f1;
  for (const auto& run : r.runs) {
    p.push_back(run.metrics.macro_precision);
    rec.push_back(run.metrics.macro_recall);
    f1.push_back(run.metrics.macro_f1);
  }
  // Independent mean and sample std.
  auto check = [](const std::vector<double>& v, const eval::Summary& s, const char* name) {
    double mean = 0;
    for (double x : v) mean += x;
    mean /= v.size();
    double ss = 0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double sd = v.size() > 1 ? std::sqrt(ss / (v.size() - 1)) : 0.0;
    expect(std::abs(mean - s.mean) < 1e-12 && std::abs(sd - s.std) < 1e-12, std::string(name) + " summary");
  };
  check(p, r.macro_precision, "precision");
  check(rec, r.macro_recall, "recall");
  check(f1, r.macro_f1, "f1");
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + SYNSYM_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void cli_reproducible() {
  std::map<std::string, std::string> first;
  for (int round = 0; round < 2; ++round) {
    const auto out = scratch_dir() / ("cli" + std::to_string(round));
    const std::string common = " --mock --seed 7 --out ";
    expect(run_cli("pipeline" + common + (out / "gen").string()) == 0, "pipeline failed");
    expect(run_cli("train" + common + (out / "model").string() + " --in " + (out / "gen" / "corpus.jsonl").string()) == 0,
           "train failed");
    expect(run_cli("eval" + common + (out / "eval").string() + " --in " + (out / "gen" / "corpus.jsonl").string() +
                   " --model " + (out / "model" / "model.bin").string()) == 0,
           "eval failed");
    for (const char* f : {"gen/corpus.jsonl", "gen/report.json", "model/model.bin", "eval/metrics.json",
                          "eval/table.txt"}) {
      const auto bytes = slurp(out / f);
      expect(!bytes.empty(), std::string(f) + " is empty");
      if (round == 0) {
        first[f] = bytes;
      } else {
        expect(bytes == first[f], std::string(f) + " differs between runs");
      }
    }
  }
}

class ShiftTranslator final : public data::Translator {
 public:
  std::string translate(std::string_view text, std::string_view from, std::string_view) override {
    std::string out(text);
    const int d = from == "en" ? 1 : -1;
    for (char& c : out) c = static_cast<char>(c + d);
    return out;
  }
};

void back_translation() {
  const auto corpus = mock_corpus(300, 21);
  data::IdentityTranslator id;
  const auto doubled = data::augment_with_backtranslation(corpus, id);
  expect(doubled.corpus.size() == 2 * corpus.size(), "identity did not double the corpus");
  expect(doubled.skipped == 0, "identity skipped samples");
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    expect(doubled.corpus.samples[i] == corpus.samples[i], "original changed");
    expect(doubled.corpus.samples[corpus.size() + i].labels == corpus.samples[i].labels, "labels changed");
  }
  ShiftTranslator shift;
  expect(shift.translate("abc", "en", "de") != "abc", "shift translator is not a real transform");
  const auto round = data::augment_with_backtranslation(corpus, shift);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    expect(round.corpus.samples[corpus.size() + i].text == corpus.samples[i].text, "round trip changed the text");
  }
}

void long_text() {
  const auto corpus = mock_corpus(800, 5);
  clf::TrainHyper hyper;
  hyper.learning_rate = 0.5;
  const auto model = clf::train_linear(corpus, hyper, 42);
  Rng rng(31);
  std::size_t nonempty = 0;
  for (int i = 0; i < 100; ++i) {
    std::string text;
    const int k = 1 + static_cast<int>(rng.below(4));
    for (int s = 0; s < k; ++s) {
      std::string sent = corpus.samples[rng.below(corpus.size())].text;
      sent.erase(std::remove_if(sent.begin(), sent.end(), [](char c) { return c == '.' || c == '!' || c == '?'; }),
                 sent.end());
      text += sent + (rng.below(2) ? ". " : "! ");
    }
    LabelSet expected;
    for (const auto& s : clf::split_sentences(text)) {
      const auto p = clf::predict(model, s, hyper.threshold);
      expected.insert(p.begin(), p.end());
    }
    const auto got = clf::predict_long(model, text, hyper.threshold);
    nonempty += !got.empty();
    expect(got == expected, "text " + std::to_string(i) + " differs from the sentence union");
  }
  expect(nonempty > 0, "every prediction was empty");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void()>>> criteria{
      {"single-generation fan-out", fanout},
      {"quality gate", quality_gate},
      {"combination sampling", combinations},
      {"label remapping golden", remap_golden},
      {"metrics oracle", metrics_oracle},
      {"trainer correctness", trainer},
      {"cross-validation protocol", cross_validation},
      {"CLI reproducibility", cli_reproducible},
      {"back-translation", back_translation},
      {"long-text aggregation", long_text},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      criteria[i].second();
      ok = true;
    } catch (const Failure& f) {
      detail = f.what;
    } catch (const Error& e) {
      detail = std::string(errc_name(e.code())) + ": " + e.what();
    } catch (const std::exception& e) {
      detail = e.what();
    }
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2fs", seconds_since(t0));
    std::cout << (ok ? "PASS " : "FAIL ") << (i + 1) << " " << criteria[i].first << " (" << timing << ")";
    if (!ok) std::cout << ": " << detail;
    std::cout << std::endl;
    failed += !ok;
  }
  std::error_code ec;
  fs::remove_all(scratch_dir(), ec);
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
