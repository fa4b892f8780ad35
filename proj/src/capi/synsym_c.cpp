#include "synsym/synsym.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <string>
#include <unordered_set>

#include "synsym/classifier.hpp"
#include "synsym/config.hpp"
#include "synsym/dataset.hpp"
#include "synsym/errors.hpp"
#include "synsym/evaluator.hpp"
#include "synsym/pipeline.hpp"

using namespace synsym;

struct synsym_config {
  app::RunConfig cfg;
};

struct synsym_corpus {
  Corpus corpus;
};

struct synsym_remap {
  data::RemapTable table;
};

struct synsym_model {
  clf::LinearModel model;
};

namespace {

thread_local std::string g_last_error;

synsym_status fail(synsym_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs `body`, mapping exceptions onto status codes.
template <typename F>
synsym_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return SYNSYM_OK;
  } catch (const Error& e) {
    return fail(static_cast<synsym_status>(e.code()), e.what());
  } catch (const std::exception& e) {
    return fail(SYNSYM_E_INTERNAL, e.what());
  } catch (...) {
    return fail(SYNSYM_E_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(Errc::kInvalidArgument, what);
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size());
  out[s.size()] = '\0';
  return out;
}

void give(char** out, const std::string& s) {
  if (out != nullptr) *out = dup(s);
}

template <typename T>
std::string jsonl_of(const std::vector<T>& items) {
  std::vector<Json> rows;
  rows.reserve(items.size());
  for (const auto& item : items) rows.push_back(to_json(item));
  return to_jsonl(rows);
}

std::vector<SubConcept> parse_subconcepts(const char* jsonl) {
  std::vector<SubConcept> out;
  for (const auto& row : parse_jsonl(jsonl)) out.push_back(sub_concept_from_json(row));
  return out;
}

std::vector<Expression> parse_expressions(const char* jsonl) {
  std::vector<Expression> out;
  for (const auto& row : parse_jsonl(jsonl)) out.push_back(expression_from_json(row));
  return out;
}

// Sub-concepts per symptom: the supplied list, the configured ones, or a fresh expansion.
gen::SubConceptIndex subconcept_index(const gen::PipelineConfig& cfg, const char* jsonl, llm::Gateway& gateway) {
  gen::SubConceptIndex index;
  if (jsonl != nullptr) {
    for (auto& sub : parse_subconcepts(jsonl)) index[sub.parent].push_back(std::move(sub));
    return index;
  }
  for (const auto& spec : cfg.symptoms) {
    index[spec.keyword] = spec.sub_concepts.empty() ? gen::expand_concepts(spec, cfg, gateway) : spec.sub_concepts;
  }
  return index;
}

clf::LinearTrainer linear_trainer(const app::RunConfig& cfg) {
  return clf::LinearTrainer(cfg.train, cfg.sentence_aggregation);
}

eval::CvOptions cv_options(const app::RunConfig& cfg) {
  return eval::CvOptions{cfg.protocol.k, cfg.protocol.seeds, cfg.protocol.split_seed, cfg.protocol.parallelism};
}

}  // namespace

extern "C" {

const char* synsym_version(void) { return "1.0.0"; }

const char* synsym_last_error(void) { return g_last_error.c_str(); }

const char* synsym_status_name(synsym_status status) {
  if (status == SYNSYM_OK) return "Ok";
  if (status == SYNSYM_E_INTERNAL) return "Internal";
  if (status >= SYNSYM_E_INVALID_ARGUMENT && status <= SYNSYM_E_TRANSIENT) {
    static thread_local std::string name;
    name = std::string(errc_name(static_cast<Errc>(status)));
    return name.c_str();
  }
  return "Unknown";
}

void synsym_string_free(char* s) { std::free(s); }

// ---- configuration ----

synsym_status synsym_config_default(synsym_config** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be NULL");
    *out = new synsym_config{app::default_run_config()};
  });
}

synsym_status synsym_config_load(const char* path, synsym_config** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "path and out must not be NULL");
    *out = new synsym_config{app::load_run_config(path)};
  });
}

void synsym_config_free(synsym_config* cfg) { delete cfg; }

synsym_status synsym_config_set_seed(synsym_config* cfg, uint64_t seed) {
  return guarded([&] {
    require(cfg != nullptr, "config must not be NULL");
    app::apply_seed(cfg->cfg, seed);
  });
}

synsym_status synsym_config_force_mock(synsym_config* cfg) {
  return guarded([&] {
    require(cfg != nullptr, "config must not be NULL");
    app::force_mock(cfg->cfg);
  });
}

synsym_status synsym_config_set_flags(synsym_config* cfg, int ev, int ck, int du, int se) {
  return guarded([&] {
    require(cfg != nullptr, "config must not be NULL");
    cfg->cfg.pipeline.flags = gen::AblationFlags{ev != 0, ck != 0, du != 0, se != 0};
  });
}

synsym_status synsym_config_set_seeds(synsym_config* cfg, const uint64_t* seeds, size_t n) {
  return guarded([&] {
    require(cfg != nullptr && seeds != nullptr && n > 0, "at least one seed is required");
    cfg->cfg.protocol.seeds.assign(seeds, seeds + n);
  });
}

synsym_status synsym_config_set_folds(synsym_config* cfg, int k) {
  return guarded([&] {
    require(cfg != nullptr, "config must not be NULL");
    require(k >= 2, "k must be at least 2");
    cfg->cfg.protocol.k = k;
  });
}

synsym_status synsym_config_scheme_name(const synsym_config* cfg, char** out) {
  return guarded([&] {
    require(cfg != nullptr && out != nullptr, "config and out must not be NULL");
    give(out, cfg->cfg.pipeline.scheme.name());
  });
}

// ---- corpora ----

synsym_status synsym_corpus_load(const char* path, const char* scheme_ref, int lenient, synsym_corpus** out) {
  return guarded([&] {
    require(path != nullptr && scheme_ref != nullptr && out != nullptr, "path, scheme and out must not be NULL");
    auto loaded = data::load_jsonl(path, load_scheme(scheme_ref),
                                   lenient != 0 ? data::LoadMode::kLenient : data::LoadMode::kStrict);
    *out = new synsym_corpus{std::move(loaded.corpus)};
  });
}

synsym_status synsym_corpus_save(const synsym_corpus* corpus, const char* path) {
  return guarded([&] {
    require(corpus != nullptr && path != nullptr, "corpus and path must not be NULL");
    data::save_jsonl(corpus->corpus, path);
  });
}

void synsym_corpus_free(synsym_corpus* corpus) { delete corpus; }

size_t synsym_corpus_size(const synsym_corpus* corpus) { return corpus == nullptr ? 0 : corpus->corpus.size(); }

synsym_status synsym_corpus_scheme_name(const synsym_corpus* corpus, char** out) {
  return guarded([&] {
    require(corpus != nullptr && out != nullptr, "corpus and out must not be NULL");
    give(out, corpus->corpus.scheme.name());
  });
}

synsym_status synsym_corpus_concat(const synsym_corpus* const* corpora, size_t n, synsym_corpus** out) {
  return guarded([&] {
    require(corpora != nullptr && n > 0 && out != nullptr, "at least one corpus is required");
    std::vector<Corpus> items;
    for (size_t i = 0; i < n; ++i) {
      require(corpora[i] != nullptr, "corpus must not be NULL");
      items.push_back(corpora[i]->corpus);
    }
    *out = new synsym_corpus{data::concat_corpora(items)};
  });
}

synsym_status synsym_corpus_stats(const synsym_corpus* corpus, char** json_out, char** table_out) {
  return guarded([&] {
    require(corpus != nullptr, "corpus must not be NULL");
    const auto stats = data::compute_stats(corpus->corpus);
    give(json_out, dump_pretty(data::to_json(stats)));
    give(table_out, data::format_stats_table(stats));
  });
}

// ---- remapping ----

synsym_status synsym_remap_load(const char* ref, synsym_remap** out) {
  return guarded([&] {
    require(ref != nullptr && out != nullptr, "ref and out must not be NULL");
    *out = new synsym_remap{data::RemapTable::load(ref)};
  });
}

void synsym_remap_free(synsym_remap* table) { delete table; }

synsym_status synsym_remap_apply(const synsym_corpus* corpus, const synsym_remap* table, const char* target_scheme_ref,
                                 synsym_corpus** out, char** stats_json) {
  return guarded([&] {
    require(corpus != nullptr && table != nullptr && target_scheme_ref != nullptr && out != nullptr,
            "corpus, table, target and out must not be NULL");
    data::RemapStats stats;
    auto remapped = data::remap_corpus(corpus->corpus, table->table, load_scheme(target_scheme_ref), &stats);
    give(stats_json, dump_pretty(Json{{"input_samples", corpus->corpus.size()},
                                      {"output_samples", remapped.size()},
                                      {"dropped_emptied", stats.emptied},
                                      {"dropped_duplicates", stats.duplicates}}));
    *out = new synsym_corpus{std::move(remapped)};
  });
}

// ---- generation ----

synsym_status synsym_expand(const synsym_config* cfg, char** subconcepts_jsonl) {
  return guarded([&] {
    require(cfg != nullptr && subconcepts_jsonl != nullptr, "config and out must not be NULL");
    gen::validate(cfg->cfg.pipeline);
    llm::Gateway gateway(cfg->cfg.provider);
    std::vector<SubConcept> all;
    for (const auto& spec : cfg->cfg.pipeline.symptoms) {
      auto subs = gen::expand_concepts(spec, cfg->cfg.pipeline, gateway);
      all.insert(all.end(), subs.begin(), subs.end());
    }
    give(subconcepts_jsonl, jsonl_of(all));
  });
}

synsym_status synsym_generate_single(const synsym_config* cfg, const char* subconcepts_jsonl,
                                     char** expressions_jsonl) {
  return guarded([&] {
    require(cfg != nullptr && expressions_jsonl != nullptr, "config and out must not be NULL");
    const auto& pc = cfg->cfg.pipeline;
    gen::validate(pc);
    llm::Gateway gateway(cfg->cfg.provider);
    std::vector<Expression> exprs;
    if (!pc.flags.use_se) {
      for (const auto& spec : pc.symptoms) {
        auto batch = gen::generate_single(spec, nullptr, pc, gateway);
        exprs.insert(exprs.end(), batch.begin(), batch.end());
      }
    } else {
      const auto index = subconcept_index(pc, subconcepts_jsonl, gateway);
      for (const auto& spec : pc.symptoms) {
        auto it = index.find(spec.keyword);
        if (it == index.end()) continue;
        for (const auto& sub : it->second) {
          auto batch = gen::generate_single(spec, &sub, pc, gateway);
          exprs.insert(exprs.end(), batch.begin(), batch.end());
        }
      }
    }
    give(expressions_jsonl, jsonl_of(exprs));
  });
}

synsym_status synsym_combine(const synsym_config* cfg, char** combinations_jsonl) {
  return guarded([&] {
    require(cfg != nullptr && combinations_jsonl != nullptr, "config and out must not be NULL");
    gen::validate(cfg->cfg.pipeline);
    llm::Gateway gateway(cfg->cfg.provider);
    give(combinations_jsonl, jsonl_of(gen::sample_combinations(cfg->cfg.pipeline, gateway)));
  });
}

synsym_status synsym_generate_multi(const synsym_config* cfg, const char* combinations_jsonl,
                                    const char* subconcepts_jsonl, char** expressions_jsonl) {
  return guarded([&] {
    require(cfg != nullptr && combinations_jsonl != nullptr && expressions_jsonl != nullptr,
            "config, combinations and out must not be NULL");
    const auto& pc = cfg->cfg.pipeline;
    gen::validate(pc);
    llm::Gateway gateway(cfg->cfg.provider);
    gen::SubConceptIndex index;
    if (pc.flags.use_se) index = subconcept_index(pc, subconcepts_jsonl, gateway);
    std::vector<Expression> exprs;
    for (const auto& row : parse_jsonl(combinations_jsonl)) {
      auto batch = gen::generate_multi(combination_from_json(row), index, pc, gateway);
      exprs.insert(exprs.end(), batch.begin(), batch.end());
    }
    give(expressions_jsonl, jsonl_of(exprs));
  });
}

synsym_status synsym_score(const synsym_config* cfg, const char* expressions_jsonl, char** scored_jsonl,
                           synsym_corpus** retained, size_t* dropped) {
  return guarded([&] {
    require(cfg != nullptr && expressions_jsonl != nullptr, "config and expressions must not be NULL");
    const auto& pc = cfg->cfg.pipeline;
    auto exprs = parse_expressions(expressions_jsonl);
    if (pc.flags.use_ev) {
      llm::Gateway gateway(cfg->cfg.provider);
      gen::score_all(exprs, pc, gateway);
    }
    give(scored_jsonl, jsonl_of(exprs));
    auto filtered = gen::filter_by_score(exprs, pc.score_threshold, pc.flags.use_ev);
    if (dropped != nullptr) *dropped = filtered.dropped;
    if (retained != nullptr) {
      Corpus corpus(pc.scheme);
      std::unordered_set<std::string> seen;
      for (const auto& e : filtered.retained) {
        Sample s = to_sample(e, pc.scheme);
        if (seen.insert(s.id).second) corpus.samples.push_back(std::move(s));
      }
      *retained = new synsym_corpus{std::move(corpus)};
    }
  });
}

synsym_status synsym_pipeline_run(const synsym_config* cfg, synsym_corpus** corpus, char** report_json,
                                  char** subconcepts_jsonl, char** combinations_jsonl, char** expressions_jsonl) {
  std::optional<Error> failure;
  const synsym_status status = guarded([&] {
    require(cfg != nullptr, "config must not be NULL");
    llm::Gateway gateway(cfg->cfg.provider);
    gen::PipelineResult run = gen::run_pipeline(cfg->cfg.pipeline, gateway);
    give(report_json, dump_pretty(gen::to_json(run.report)));
    give(subconcepts_jsonl, jsonl_of(run.sub_concepts));
    give(combinations_jsonl, jsonl_of(run.combinations));
    give(expressions_jsonl, jsonl_of(run.expressions));
    if (corpus != nullptr) *corpus = new synsym_corpus{std::move(run.corpus)};
    failure = run.failure;
  });
  if (status != SYNSYM_OK) return status;
  if (failure) return fail(static_cast<synsym_status>(failure->code()), failure->what());
  return SYNSYM_OK;
}

// ---- augmentation ----

synsym_status synsym_rewrite(const synsym_config* cfg, const synsym_corpus* corpus, synsym_corpus** out,
                             size_t* failed) {
  return guarded([&] {
    require(cfg != nullptr && corpus != nullptr && out != nullptr, "config, corpus and out must not be NULL");
    llm::Gateway gateway(cfg->cfg.provider);
    Corpus result(corpus->corpus.scheme);
    result.samples = data::rewrite_all(corpus->corpus.samples, gateway, cfg->cfg.pipeline.prompts);
    if (failed != nullptr) {
      *failed = 0;
      for (const auto& s : result.samples) *failed += s.meta.count("rewrite_failed");
    }
    *out = new synsym_corpus{std::move(result)};
  });
}

synsym_status synsym_backtranslate(const synsym_config* cfg, const synsym_corpus* corpus, const char* pivot,
                                   int identity, synsym_corpus** out, size_t* skipped) {
  return guarded([&] {
    require(cfg != nullptr && corpus != nullptr && out != nullptr, "config, corpus and out must not be NULL");
    const std::string lang = pivot != nullptr ? pivot : "de";
    data::AugmentResult result{Corpus(corpus->corpus.scheme), 0};
    if (identity != 0) {
      data::IdentityTranslator translator;
      result = data::augment_with_backtranslation(corpus->corpus, translator, lang);
    } else {
      llm::Gateway gateway(cfg->cfg.provider);
      data::LlmTranslator translator(gateway, cfg->cfg.pipeline.prompts);
      result = data::augment_with_backtranslation(corpus->corpus, translator, lang);
    }
    if (skipped != nullptr) *skipped = result.skipped;
    *out = new synsym_corpus{std::move(result.corpus)};
  });
}

// ---- classification ----

synsym_status synsym_train(const synsym_config* cfg, const synsym_corpus* corpus, uint64_t seed, synsym_model** out) {
  return guarded([&] {
    require(cfg != nullptr && corpus != nullptr && out != nullptr, "config, corpus and out must not be NULL");
    *out = new synsym_model{clf::train_linear(corpus->corpus, cfg->cfg.train, seed)};
  });
}

synsym_status synsym_model_save(const synsym_model* model, const char* path) {
  return guarded([&] {
    require(model != nullptr && path != nullptr, "model and path must not be NULL");
    clf::save_model(model->model, path);
  });
}

synsym_status synsym_model_load(const char* path, synsym_model** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "path and out must not be NULL");
    *out = new synsym_model{clf::load_model(path)};
  });
}

void synsym_model_free(synsym_model* model) { delete model; }

synsym_status synsym_model_predict(const synsym_model* model, const char* text, double threshold, int long_mode,
                                   char** labels_json) {
  return guarded([&] {
    require(model != nullptr && text != nullptr && labels_json != nullptr, "model, text and out must not be NULL");
    require(threshold > 0.0 && threshold < 1.0, "threshold must lie in (0, 1)");
    const LabelSet labels = long_mode != 0 ? clf::predict_long(model->model, text, threshold)
                                           : clf::predict(model->model, text, threshold);
    give(labels_json, Json(labels).dump());
  });
}

synsym_status synsym_model_evaluate(const synsym_model* model, const synsym_corpus* test, double threshold,
                                    int long_mode, char** metrics_json, char** table) {
  return guarded([&] {
    require(model != nullptr && test != nullptr, "model and test must not be NULL");
    require(threshold > 0.0 && threshold < 1.0, "threshold must lie in (0, 1)");
    if (!(model->model.scheme == test->corpus.scheme)) {
      throw Error(Errc::kSchemeMismatch, "model scheme " + model->model.scheme.name() + " differs from corpus scheme " +
                                             test->corpus.scheme.name());
    }
    auto shared = std::make_shared<const clf::LinearModel>(model->model);
    clf::LinearPredictor predictor(shared, threshold, long_mode != 0);
    const auto result = eval::aggregate({eval::RunRecord{-1, model->model.seed, 0, test->corpus.size(),
                                                         eval::evaluate(predictor, test->corpus)}});
    give(metrics_json, dump_pretty(eval::to_json(result)));
    give(table, eval::format_aggregate_table("linear", result));
  });
}

synsym_status synsym_llm_classify(const synsym_config* cfg, const synsym_corpus* corpus, const char* strategy,
                                  char** predictions_jsonl, char** metrics_json, char** table) {
  return guarded([&] {
    require(cfg != nullptr && corpus != nullptr && strategy != nullptr, "config, corpus and strategy must not be NULL");
    const auto strat = clf::parse_strategy(strategy);
    if (!strat) throw Error(Errc::kInvalidArgument, std::string("unknown strategy '") + strategy + "'");
    llm::Gateway gateway(cfg->cfg.provider);
    std::vector<Json> rows;
    std::vector<LabelSet> preds, golds;
    for (const auto& s : corpus->corpus.samples) {
      auto r = clf::llm_classify(s.text, corpus->corpus.scheme, *strat, gateway, cfg->cfg.pipeline.prompts);
      rows.push_back(Json{{"id", s.id}, {"labels", r.labels}, {"failed", r.failed}});
      preds.push_back(r.labels);
      golds.push_back(s.labels);
    }
    give(predictions_jsonl, to_jsonl(rows));
    const auto result = eval::aggregate(
        {eval::RunRecord{-1, 0, 0, corpus->corpus.size(),
                         eval::macro_metrics(eval::confusion_counts(preds, golds, corpus->corpus.scheme))}});
    give(metrics_json, dump_pretty(eval::to_json(result)));
    give(table, eval::format_aggregate_table("llm-" + std::string(clf::to_string(*strat)), result));
  });
}

// ---- protocol ----

synsym_status synsym_evaluate_protocol(const synsym_config* cfg, const synsym_corpus* corpus,
                                       const synsym_corpus* test, char** report_json, char** table,
                                       char** per_class_csv) {
  return guarded([&] {
    require(cfg != nullptr && corpus != nullptr, "config and corpus must not be NULL");
    app::validate(cfg->cfg);
    const auto trainer = linear_trainer(cfg->cfg);
    const auto result = test != nullptr
                            ? eval::run_fixed_split(corpus->corpus, test->corpus, cfg->cfg.protocol.seeds, trainer,
                                                    cfg->cfg.protocol.parallelism)
                            : eval::run_cv(corpus->corpus, cv_options(cfg->cfg), trainer);
    give(report_json, dump_pretty(eval::to_json(result)));
    give(table, eval::format_aggregate_table(trainer.name(), result));
    give(per_class_csv, eval::per_class_csv(result));
  });
}

synsym_status synsym_cross_eval(const synsym_config* cfg, const synsym_corpus* const* train,
                                const char* const* train_names, size_t n_train, const synsym_corpus* const* test,
                                const char* const* test_names, size_t n_test, const synsym_remap* remap,
                                const char* target_scheme_ref, char** report_json, char** table) {
  return guarded([&] {
    require(cfg != nullptr && train != nullptr && train_names != nullptr && test != nullptr && test_names != nullptr,
            "config, corpora and names must not be NULL");
    std::vector<eval::NamedCorpus> rows, cols;
    for (size_t i = 0; i < n_train; ++i) {
      require(train[i] != nullptr && train_names[i] != nullptr, "training corpus must not be NULL");
      rows.push_back({train_names[i], train[i]->corpus});
    }
    for (size_t i = 0; i < n_test; ++i) {
      require(test[i] != nullptr && test_names[i] != nullptr, "test corpus must not be NULL");
      cols.push_back({test_names[i], test[i]->corpus});
    }
    eval::CrossEvalOptions options;
    options.train_ratio = cfg->cfg.protocol.train_ratio;
    options.split_seed = cfg->cfg.protocol.split_seed;
    options.train_seed = cfg->cfg.protocol.seeds.front();
    if (remap != nullptr) options.remap = remap->table;
    if (target_scheme_ref != nullptr) options.target = load_scheme(target_scheme_ref);
    const auto result = eval::cross_eval(rows, cols, linear_trainer(cfg->cfg), options);
    give(report_json, dump_pretty(eval::to_json(result)));
    give(table, eval::format_cross_eval_table(result));
  });
}

synsym_status synsym_ablate(const synsym_config* cfg, const synsym_corpus* test, const synsym_remap* remap,
                            char** report_json, char** table) {
  return guarded([&] {
    require(cfg != nullptr, "config must not be NULL");
    app::validate(cfg->cfg);
    eval::AblationOptions options;
    options.cv = cv_options(cfg->cfg);
    if (test != nullptr) options.test = test->corpus;
    if (remap != nullptr) options.remap = remap->table;
    const auto rows = eval::run_ablation(cfg->cfg.pipeline, eval::cumulative_variants(), cfg->cfg.provider,
                                         linear_trainer(cfg->cfg), options);
    give(report_json, dump_pretty(eval::to_json(rows)));
    give(table, eval::format_ablation_table(rows));
  });
}

}  // extern "C"
