#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "doctest.h"
#include "synsym/synsym.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  synsym_string_free(s);
  return out;
}

std::string tmp_path(const char* name) {
  const char* base = std::getenv("TMPDIR");
  return std::string(base ? base : "/tmp") + "/synsym-capi-" + name;
}

synsym_config* small_config() {
  synsym_config* cfg = nullptr;
  REQUIRE(synsym_config_default(&cfg) == SYNSYM_OK);
  return cfg;
}

}  // namespace

TEST_SUITE("capi") {
  TEST_CASE("status names and errors") {
    CHECK(std::string(synsym_status_name(SYNSYM_OK)) == "Ok");
    CHECK(std::string(synsym_status_name(SYNSYM_E_SCHEME_MISMATCH)) == "SchemeMismatch");
    CHECK(std::string(synsym_version()).size() > 0);
    synsym_corpus* c = nullptr;
    CHECK(synsym_corpus_load("/no/such/file.jsonl", "DSM5-14", 0, &c) == SYNSYM_E_IO);
    CHECK(c == nullptr);
    CHECK(std::string(synsym_last_error()).find("/no/such/file.jsonl") != std::string::npos);
    CHECK(synsym_corpus_load(nullptr, "DSM5-14", 0, &c) == SYNSYM_E_INVALID_ARGUMENT);
    synsym_config_free(nullptr);
    synsym_corpus_free(nullptr);
    synsym_model_free(nullptr);
    synsym_remap_free(nullptr);
  }

  TEST_CASE("config setters validate") {
    synsym_config* cfg = small_config();
    CHECK(synsym_config_set_folds(cfg, 1) == SYNSYM_E_INVALID_ARGUMENT);
    CHECK(synsym_config_set_seeds(cfg, nullptr, 0) == SYNSYM_E_INVALID_ARGUMENT);
    CHECK(synsym_config_set_seed(cfg, 9) == SYNSYM_OK);
    char* name = nullptr;
    REQUIRE(synsym_config_scheme_name(cfg, &name) == SYNSYM_OK);
    CHECK(take(name) == "DSM5-14");
    synsym_config_free(cfg);
  }

  TEST_CASE("pipeline, train, save, load and predict through handles") {
    synsym_config* cfg = small_config();
    REQUIRE(synsym_config_set_seed(cfg, 5) == SYNSYM_OK);
    synsym_corpus* corpus = nullptr;
    char *report = nullptr, *subs = nullptr, *combos = nullptr, *exprs = nullptr;
    REQUIRE(synsym_pipeline_run(cfg, &corpus, &report, &subs, &combos, &exprs) == SYNSYM_OK);
    CHECK(synsym_corpus_size(corpus) > 1000);
    CHECK(take(report).find("\"total_samples\"") != std::string::npos);
    take(subs);
    take(combos);
    take(exprs);

    char *stats = nullptr, *table = nullptr;
    REQUIRE(synsym_corpus_stats(corpus, &stats, &table) == SYNSYM_OK);
    CHECK(take(stats).find("n_samples") != std::string::npos);
    take(table);

    synsym_model* model = nullptr;
    REQUIRE(synsym_train(cfg, corpus, 42, &model) == SYNSYM_OK);
    const auto path = tmp_path("model.bin");
    REQUIRE(synsym_model_save(model, path.c_str()) == SYNSYM_OK);
    synsym_model* loaded = nullptr;
    REQUIRE(synsym_model_load(path.c_str(), &loaded) == SYNSYM_OK);
    char *a = nullptr, *b = nullptr;
    REQUIRE(synsym_model_predict(model, "I cannot sleep at night.", 0.5, 0, &a) == SYNSYM_OK);
    REQUIRE(synsym_model_predict(loaded, "I cannot sleep at night.", 0.5, 0, &b) == SYNSYM_OK);
    const auto pa = take(a);
    CHECK(pa == take(b));
    CHECK(pa.front() == '[');

    char *metrics = nullptr, *mtable = nullptr;
    REQUIRE(synsym_model_evaluate(loaded, corpus, 0.5, 0, &metrics, &mtable) == SYNSYM_OK);
    CHECK(take(metrics).find("macro_f1") != std::string::npos);
    take(mtable);

    std::remove(path.c_str());
    synsym_model_free(model);
    synsym_model_free(loaded);
    synsym_corpus_free(corpus);
    synsym_config_free(cfg);
  }

  TEST_CASE("remap and concat") {
    const auto path = tmp_path("remap.jsonl");
    {
      FILE* f = std::fopen(path.c_str(), "w");
      REQUIRE(f);
      std::fputs(
          "{\"id\":\"a1\",\"text\":\"so sad\",\"labels\":[\"Depressed Mood\"],\"source\":\"real\",\"scheme\":\"DSM5-14\"}\n",
          f);
      std::fclose(f);
    }
    synsym_corpus* c = nullptr;
    REQUIRE(synsym_corpus_load(path.c_str(), "DSM5-14", 0, &c) == SYNSYM_OK);
    synsym_remap* table = nullptr;
    REQUIRE(synsym_remap_load("default", &table) == SYNSYM_OK);
    synsym_corpus* out = nullptr;
    char* stats = nullptr;
    REQUIRE(synsym_remap_apply(c, table, "PHQ9-9", &out, &stats) == SYNSYM_OK);
    take(stats);
    char* name = nullptr;
    REQUIRE(synsym_corpus_scheme_name(out, &name) == SYNSYM_OK);
    CHECK(take(name) == "PHQ9-9");

    const synsym_corpus* mixed[] = {c, out};
    synsym_corpus* joined = nullptr;
    CHECK(synsym_corpus_concat(mixed, 2, &joined) == SYNSYM_E_SCHEME_MISMATCH);
    CHECK(joined == nullptr);
    const synsym_corpus* same[] = {c, c};
    REQUIRE(synsym_corpus_concat(same, 2, &joined) == SYNSYM_OK);
    CHECK(synsym_corpus_size(joined) == 1);

    std::remove(path.c_str());
    synsym_corpus_free(joined);
    synsym_corpus_free(out);
    synsym_corpus_free(c);
    synsym_remap_free(table);
  }
}
