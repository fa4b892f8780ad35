#include "synsym/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>

#include "synsym/errors.hpp"

namespace synsym::eval {

ClassCounts confusion_counts(const std::vector<LabelSet>& preds, const std::vector<LabelSet>& golds,
                             const LabelScheme& scheme) {
  if (preds.size() != golds.size()) {
    throw Error(Errc::kLengthMismatch, std::to_string(preds.size()) + " predictions for " +
                                           std::to_string(golds.size()) + " gold label sets");
  }
  ClassCounts counts;
  for (const auto& c : scheme.classes()) counts.push_back({c, 0, 0, 0});
  auto index = [&](const std::string& label) {
    auto i = scheme.index_of(label);
    if (!i) throw Error(Errc::kSchemaViolation, "label '" + label + "' is not in scheme " + scheme.name());
    return *i;
  };
  for (std::size_t n = 0; n < preds.size(); ++n) {
    for (const auto& l : preds[n]) {
      auto& c = counts[index(l)];
      (golds[n].count(l) ? c.tp : c.fp) += 1;
    }
    for (const auto& l : golds[n]) {
      if (!preds[n].count(l)) counts[index(l)].fn += 1;
    }
  }
  return counts;
}

Metrics macro_metrics(const ClassCounts& counts) {
  Metrics m;
  for (const auto& c : counts) {
    ClassMetrics cm;
    cm.cls = c.cls;
    cm.support = c.support();
    cm.predicted = c.predicted();
    const auto ratio = [](std::uint64_t a, std::uint64_t b) {
      return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b);
    };
    cm.precision = ratio(c.tp, c.tp + c.fp);
    cm.recall = ratio(c.tp, c.tp + c.fn);
    cm.f1 = cm.precision + cm.recall == 0.0 ? 0.0 : 2.0 * cm.precision * cm.recall / (cm.precision + cm.recall);
    cm.evaluated = cm.support > 0 || cm.predicted > 0;
    (cm.evaluated ? m.evaluated : m.excluded).push_back(c.cls);
    if (cm.evaluated) {
      m.macro_precision += cm.precision;
      m.macro_recall += cm.recall;
      m.macro_f1 += cm.f1;
    }
    m.per_class.push_back(std::move(cm));
  }
  if (m.evaluated.empty()) throw Error(Errc::kNoEvaluableClasses, "no class has gold support or predictions");
  const auto n = static_cast<double>(m.evaluated.size());
  m.macro_precision /= n;
  m.macro_recall /= n;
  m.macro_f1 /= n;
  return m;
}

Metrics evaluate(const clf::Predictor& predictor, const Corpus& test) {
  std::vector<LabelSet> golds;
  golds.reserve(test.size());
  for (const auto& s : test.samples) golds.push_back(s.labels);
  return macro_metrics(confusion_counts(predictor.predict_all(test.samples), golds, test.scheme));
}

Summary summarize(const std::vector<double>& values) {
  Summary s;
  if (values.empty()) return s;
  if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); })) {
    s.mean = values.front();
    return s;
  }
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(sq / (n - 1.0));
  }
  return s;
}

AggregateResult aggregate(std::vector<RunRecord> runs) {
  AggregateResult r;
  std::vector<double> p, rec, f1;
  for (const auto& run : runs) {
    p.push_back(run.metrics.macro_precision);
    rec.push_back(run.metrics.macro_recall);
    f1.push_back(run.metrics.macro_f1);
  }
  r.runs = std::move(runs);
  r.macro_precision = summarize(p);
  r.macro_recall = summarize(rec);
  r.macro_f1 = summarize(f1);
  return r;
}

namespace {

struct Job {
  int fold;
  std::uint64_t seed;
  const Corpus* train;
  const Corpus* test;
};

std::string job_label(const Job& job) {
  std::string label = "seed " + std::to_string(job.seed);
  if (job.fold >= 0) label += " fold " + std::to_string(job.fold);
  return label;
}

RunRecord execute(const Job& job, const clf::Trainer& trainer) {
  try {
    auto predictor = trainer.train(*job.train, job.seed);
    return RunRecord{job.fold, job.seed, job.train->size(), job.test->size(), evaluate(*predictor, *job.test)};
  } catch (const Error& e) {
    throw Error(e.code(), job_label(job) + ": " + e.what());
  }
}

// Results come back in job order whatever the parallelism.
std::vector<RunRecord> execute_all(const std::vector<Job>& jobs, const clf::Trainer& trainer, int parallelism) {
  std::vector<RunRecord> out;
  out.reserve(jobs.size());
  if (parallelism <= 1) {
    for (const auto& job : jobs) out.push_back(execute(job, trainer));
    return out;
  }
  for (std::size_t start = 0; start < jobs.size(); start += static_cast<std::size_t>(parallelism)) {
    const std::size_t end = std::min(jobs.size(), start + static_cast<std::size_t>(parallelism));
    std::vector<std::future<RunRecord>> batch;
    for (std::size_t i = start; i < end; ++i) {
      batch.push_back(std::async(std::launch::async, [&, i] { return execute(jobs[i], trainer); }));
    }
    for (auto& f : batch) out.push_back(f.get());
  }
  return out;
}

}  // namespace

AggregateResult run_cv(const Corpus& corpus, const CvOptions& options, const clf::Trainer& trainer) {
  if (options.seeds.empty()) throw Error(Errc::kInvalidArgument, "at least one seed is required");
  const data::SplitPlan plan = data::kfold_split(corpus, options.k, options.split_seed);
  std::vector<std::pair<Corpus, Corpus>> folds;
  for (std::size_t f = 0; f < plan.folds.size(); ++f) folds.push_back(data::fold_partition(corpus, plan, f));
  std::vector<Job> jobs;
  for (auto seed : options.seeds) {
    for (std::size_t f = 0; f < folds.size(); ++f) {
      jobs.push_back({static_cast<int>(f), seed, &folds[f].first, &folds[f].second});
    }
  }
  return aggregate(execute_all(jobs, trainer, options.parallelism));
}

AggregateResult run_fixed_split(const Corpus& train, const Corpus& test, const std::vector<std::uint64_t>& seeds,
                                const clf::Trainer& trainer, int parallelism) {
  if (seeds.empty()) throw Error(Errc::kInvalidArgument, "at least one seed is required");
  if (!(train.scheme == test.scheme)) {
    throw Error(Errc::kSchemeMismatch, "train scheme " + train.scheme.name() + " differs from test scheme " +
                                           test.scheme.name());
  }
  std::vector<Job> jobs;
  for (auto seed : seeds) jobs.push_back({-1, seed, &train, &test});
  return aggregate(execute_all(jobs, trainer, parallelism));
}

// ---- cross-dataset --------------------------------------------------------------

namespace {

Corpus to_target(const Corpus& corpus, const LabelScheme& target, const std::optional<data::RemapTable>& remap) {
  if (corpus.scheme == target) return corpus;
  if (!remap) {
    throw Error(Errc::kSchemeMismatch, "corpus in " + corpus.scheme.name() + " needs a remap table to reach " +
                                           target.name());
  }
  return data::remap_corpus(corpus, *remap, target);
}

}  // namespace

CrossEvalResult cross_eval(const std::vector<NamedCorpus>& train_corpora, const std::vector<NamedCorpus>& test_corpora,
                           const clf::Trainer& trainer, const CrossEvalOptions& options) {
  if (train_corpora.empty() || test_corpora.empty()) {
    throw Error(Errc::kInvalidArgument, "cross evaluation needs at least one training and one test corpus");
  }
  const LabelScheme target = options.target ? *options.target : train_corpora.front().corpus.scheme;
  auto prepare = [&](const NamedCorpus& nc) {
    auto [train, test] = data::train_val_split(nc.corpus, options.train_ratio, options.split_seed);
    return std::pair{to_target(train, target, options.remap), to_target(test, target, options.remap)};
  };

  CrossEvalResult result;
  std::vector<Corpus> held_out;
  for (const auto& nc : test_corpora) {
    result.cols.push_back(nc.name);
    held_out.push_back(prepare(nc).second);
  }
  for (const auto& nc : train_corpora) {
    result.rows.push_back(nc.name);
    const Corpus train = prepare(nc).first;
    std::unique_ptr<clf::Predictor> predictor;
    try {
      predictor = trainer.train(train, options.train_seed);
    } catch (const Error& e) {
      throw Error(e.code(), "training on " + nc.name + ": " + e.what());
    }
    std::vector<Metrics> row;
    for (std::size_t c = 0; c < held_out.size(); ++c) {
      try {
        row.push_back(evaluate(*predictor, held_out[c]));
      } catch (const Error& e) {
        throw Error(e.code(), nc.name + " -> " + result.cols[c] + ": " + e.what());
      }
    }
    result.cells.push_back(std::move(row));
  }
  return result;
}

// ---- ablation -----------------------------------------------------------------

std::vector<AblationVariant> cumulative_variants() {
  std::vector<AblationVariant> out;
  gen::AblationFlags flags;
  out.push_back({"SynSym (full)", flags});
  flags.use_ev = false;
  out.push_back({"w/o EV", flags});
  flags.use_ck = false;
  out.push_back({"w/o EV + CK", flags});
  flags.use_du = false;
  out.push_back({"w/o EV + CK + DU", flags});
  flags.use_se = false;
  out.push_back({"w/o EV + CK + DU + SE", flags});
  return out;
}

std::vector<AblationRow> run_ablation(const gen::PipelineConfig& base, const std::vector<AblationVariant>& variants,
                                      const llm::ProviderConfig& provider, const clf::Trainer& trainer,
                                      const AblationOptions& options) {
  std::vector<AblationRow> rows;
  for (const auto& variant : variants) {
    AblationRow row;
    row.variant = variant;
    try {
      gen::PipelineConfig cfg = base;
      cfg.flags = variant.flags;
      llm::Gateway gateway(provider);
      gen::PipelineResult run = gen::run_pipeline(cfg, gateway);
      row.evaluation_calls = gateway.requests(llm::Stage::kEvaluation);
      row.total_calls = gateway.total_requests();
      row.corpus_size = run.corpus.size();
      if (run.failure) throw *run.failure;
      if (options.test) {
        const Corpus train = to_target(run.corpus, options.test->scheme, options.remap);
        row.result = run_fixed_split(train, *options.test, options.cv.seeds, trainer, options.cv.parallelism);
      } else {
        row.result = run_cv(run.corpus, options.cv, trainer);
      }
    } catch (const Error& e) {
      row.error = std::string(errc_name(e.code())) + ": " + e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace synsym::eval
