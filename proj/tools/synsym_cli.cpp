// synsym command-line tool. Talks to the library only through synsym.h.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "synsym/synsym.h"

namespace fs = std::filesystem;

namespace {

// Thrown on a failed library call; carries the status for the exit code.
struct Failure {
  synsym_status status;
  std::string message;
};

void check(synsym_status status) {
  if (status != SYNSYM_OK) throw Failure{status, synsym_last_error()};
}

struct CString {
  char* p = nullptr;
  ~CString() { synsym_string_free(p); }
  char** out() { return &p; }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

template <typename T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle(Handle&& o) noexcept : p(o.p) { o.p = nullptr; }
  Handle& operator=(Handle&& o) noexcept {
    if (this != &o) {
      Free(p);
      p = o.p;
      o.p = nullptr;
    }
    return *this;
  }
  ~Handle() { Free(p); }
  T** out() { return &p; }
  T* get() const { return p; }
};

using Config = Handle<synsym_config, synsym_config_free>;
using CorpusH = Handle<synsym_corpus, synsym_corpus_free>;
using Remap = Handle<synsym_remap, synsym_remap_free>;
using Model = Handle<synsym_model, synsym_model_free>;

struct Common {
  std::optional<std::uint64_t> seed;
  std::string config;
  bool mock = false;
  std::string out = "synsym_out";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Root seed (overrides the config)");
  cmd->add_option("--config", c.config, "JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_flag("--mock", c.mock, "Use the deterministic mock provider");
  cmd->add_option("--out", c.out, "Output directory")->capture_default_str();
}

Config make_config(const Common& c) {
  Config cfg;
  check(c.config.empty() ? synsym_config_default(cfg.out()) : synsym_config_load(c.config.c_str(), cfg.out()));
  if (c.seed) check(synsym_config_set_seed(cfg.get(), *c.seed));
  if (c.mock) check(synsym_config_force_mock(cfg.get()));
  return cfg;
}

std::uint64_t root_seed(const Common& c) { return c.seed.value_or(42); }

void write(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  f << content;
  if (!f) throw Failure{SYNSYM_E_IO, "cannot write " + path.string()};
  std::cerr << "wrote " << path.string() << '\n';
}

std::string read(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Failure{SYNSYM_E_IO, "cannot read " + path.string()};
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

CorpusH load_corpus(const std::string& path, const std::string& scheme, bool lenient) {
  CorpusH corpus;
  check(synsym_corpus_load(path.c_str(), scheme.c_str(), lenient ? 1 : 0, corpus.out()));
  return corpus;
}

void save_corpus(const CorpusH& corpus, const fs::path& path) {
  check(synsym_corpus_save(corpus.get(), path.string().c_str()));
  std::cerr << "wrote " << path.string() << '\n';
}

std::string json_count(const char* key, std::size_t n, const char* key2 = nullptr, std::size_t n2 = 0) {
  std::string s = "{\n  \"" + std::string(key) + "\": " + std::to_string(n);
  if (key2) s += ",\n  \"" + std::string(key2) + "\": " + std::to_string(n2);
  return s + "\n}\n";
}

// "name,SCHEME,path"
struct CorpusRef {
  std::string name, scheme, path;
};

CorpusRef parse_ref(const std::string& text) {
  const auto a = text.find(',');
  const auto b = a == std::string::npos ? a : text.find(',', a + 1);
  if (b == std::string::npos) throw CLI::ValidationError("corpus", "expected name,SCHEME,path but got '" + text + "'");
  return {text.substr(0, a), text.substr(a + 1, b - a - 1), text.substr(b + 1)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"synsym: synthetic symptom corpus generation and classifier evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", synsym_version());

  Common common;
  std::string in, scheme = "DSM5-14", subconcepts, combinations, table_ref = "default";
  std::string from_scheme = "DSM5-14", to_scheme = "PHQ9-9", pivot = "de", model_path, test_path;
  std::string test_scheme = "PHQ9-9", strategy = "zsl", target;
  std::vector<std::string> train_refs, test_refs;
  std::vector<std::uint64_t> seeds;
  int folds = 0;
  double threshold = 0.5;
  bool lenient = false, identity = false, long_mode = false;

  auto* expand = app.add_subcommand("expand", "Expand every configured symptom into sub-concepts");
  auto* gen_single = app.add_subcommand("gen-single", "Generate single-symptom expressions");
  gen_single->add_option("--subconcepts", subconcepts, "Sub-concepts JSONL (expanded when absent)")
      ->check(CLI::ExistingFile);
  auto* combine = app.add_subcommand("combine", "Sample symptom combinations");
  auto* gen_multi = app.add_subcommand("gen-multi", "Generate multi-symptom expressions");
  gen_multi->add_option("--combinations", combinations, "Combinations JSONL")->required()->check(CLI::ExistingFile);
  gen_multi->add_option("--subconcepts", subconcepts, "Sub-concepts JSONL")->check(CLI::ExistingFile);
  auto* score = app.add_subcommand("score", "Score expressions and filter by quality");
  score->add_option("--in", in, "Expressions JSONL")->required()->check(CLI::ExistingFile);
  auto* pipeline = app.add_subcommand("pipeline", "Run the full generation pipeline");
  auto* stats = app.add_subcommand("stats", "Corpus statistics");
  auto* remap = app.add_subcommand("remap", "Remap corpus labels to another scheme");
  remap->add_option("--table", table_ref, "Remap table: 'default' or a JSON file")->capture_default_str();
  remap->add_option("--from", from_scheme, "Source scheme")->capture_default_str();
  remap->add_option("--to", to_scheme, "Target scheme")->capture_default_str();
  auto* rewrite = app.add_subcommand("rewrite", "Rewrite figurative language literally");
  auto* backtranslate = app.add_subcommand("backtranslate", "Augment a corpus by back-translation");
  backtranslate->add_option("--pivot", pivot, "Pivot language")->capture_default_str();
  backtranslate->add_flag("--identity", identity, "Use the identity translator");
  auto* train = app.add_subcommand("train", "Train the linear classifier");
  auto* evalc = app.add_subcommand("eval", "Evaluate a model, or run the k-fold x seeds protocol");
  evalc->add_option("--model", model_path, "Trained model file")->check(CLI::ExistingFile);
  evalc->add_option("--test", test_path, "Fixed test corpus (protocol mode)")->check(CLI::ExistingFile);
  evalc->add_option("--test-scheme", test_scheme, "Scheme of --test")->capture_default_str();
  evalc->add_option("--threshold", threshold, "Decision threshold")->capture_default_str();
  evalc->add_flag("--long", long_mode, "Aggregate per-sentence predictions");
  evalc->add_option("--table", table_ref, "Remap table applied to --in when --test uses another scheme")
      ->capture_default_str();
  auto* cross = app.add_subcommand("cross-eval", "Cross-dataset evaluation matrix");
  cross->add_option("--train", train_refs, "Training corpus as name,SCHEME,path")->required();
  cross->add_option("--test", test_refs, "Test corpus as name,SCHEME,path")->required();
  cross->add_option("--table", table_ref, "Remap table: 'default', a JSON file, or 'none'")->capture_default_str();
  cross->add_option("--target", target, "Target scheme (default: first training corpus)");
  auto* ablate = app.add_subcommand("ablate", "Pipeline ablation study");
  ablate->add_option("--test", test_path, "Held-out test corpus")->check(CLI::ExistingFile);
  ablate->add_option("--test-scheme", test_scheme, "Scheme of --test")->capture_default_str();
  ablate->add_option("--table", table_ref, "Remap table for --test")->capture_default_str();
  auto* llm = app.add_subcommand("llm-classify", "Zero-shot LLM classification");
  llm->add_option("--strategy", strategy, "zsl, cot or ps")->check(CLI::IsMember({"zsl", "cot", "ps"}))
      ->capture_default_str();

  for (auto* cmd : {expand, gen_single, combine, gen_multi, score, pipeline, stats, remap, rewrite, backtranslate,
                    train, evalc, cross, ablate, llm}) {
    add_common(cmd, common);
  }
  for (auto* cmd : {stats, remap, rewrite, backtranslate, train, evalc, llm}) {
    cmd->add_option("--in", in, "Corpus JSONL")->required()->check(CLI::ExistingFile);
    cmd->add_flag("--lenient", lenient, "Drop invalid rows instead of failing");
  }
  for (auto* cmd : {stats, rewrite, backtranslate, train, evalc, llm}) {
    cmd->add_option("--scheme", scheme, "Label scheme of --in")->capture_default_str();
  }
  for (auto* cmd : {evalc, ablate}) {
    cmd->add_option("--seeds", seeds, "Training seeds")->expected(1, -1);
    cmd->add_option("--k", folds, "Number of folds");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    std::cerr << (subs.empty() ? app.help() : subs.front()->help());
    return 2;
  }

  const fs::path out = common.out;
  try {
    Config cfg = make_config(common);
    if (!seeds.empty()) check(synsym_config_set_seeds(cfg.get(), seeds.data(), seeds.size()));
    if (folds != 0) check(synsym_config_set_folds(cfg.get(), folds));

    if (*expand) {
      CString subs;
      check(synsym_expand(cfg.get(), subs.out()));
      write(out / "subconcepts.jsonl", subs.str());
    } else if (*gen_single) {
      std::string subs_text = subconcepts.empty() ? std::string() : read(subconcepts);
      CString exprs;
      check(synsym_generate_single(cfg.get(), subconcepts.empty() ? nullptr : subs_text.c_str(), exprs.out()));
      write(out / "expressions.jsonl", exprs.str());
    } else if (*combine) {
      CString combs;
      check(synsym_combine(cfg.get(), combs.out()));
      write(out / "combinations.jsonl", combs.str());
    } else if (*gen_multi) {
      const std::string combs = read(combinations);
      const std::string subs_text = subconcepts.empty() ? std::string() : read(subconcepts);
      CString exprs;
      check(synsym_generate_multi(cfg.get(), combs.c_str(), subconcepts.empty() ? nullptr : subs_text.c_str(),
                                  exprs.out()));
      write(out / "expressions.jsonl", exprs.str());
    } else if (*score) {
      const std::string exprs = read(in);
      CString scored;
      CorpusH retained;
      std::size_t dropped = 0;
      check(synsym_score(cfg.get(), exprs.c_str(), scored.out(), retained.out(), &dropped));
      write(out / "expressions.jsonl", scored.str());
      save_corpus(retained, out / "corpus.jsonl");
      write(out / "report.json", json_count("retained", synsym_corpus_size(retained.get()), "dropped", dropped));
    } else if (*pipeline) {
      CorpusH corpus;
      CString report, subs, combs, exprs;
      const synsym_status status = synsym_pipeline_run(cfg.get(), corpus.out(), report.out(), subs.out(), combs.out(),
                                                       exprs.out());
      const std::string error = synsym_last_error();
      if (corpus.get() != nullptr) {
        save_corpus(corpus, out / "corpus.jsonl");
        write(out / "report.json", report.str());
        write(out / "subconcepts.jsonl", subs.str());
        write(out / "combinations.jsonl", combs.str());
        write(out / "expressions.jsonl", exprs.str());
      }
      if (status != SYNSYM_OK) throw Failure{status, error};
    } else if (*stats) {
      CorpusH corpus = load_corpus(in, scheme, lenient);
      CString json, table;
      check(synsym_corpus_stats(corpus.get(), json.out(), table.out()));
      write(out / "stats.json", json.str());
      write(out / "table.txt", table.str());
      std::cout << table.str();
    } else if (*remap) {
      CorpusH corpus = load_corpus(in, from_scheme, lenient);
      Remap table;
      check(synsym_remap_load(table_ref.c_str(), table.out()));
      CorpusH remapped;
      CString report;
      check(synsym_remap_apply(corpus.get(), table.get(), to_scheme.c_str(), remapped.out(), report.out()));
      if (out.extension() == ".jsonl") {
        save_corpus(remapped, out);
      } else {
        save_corpus(remapped, out / "corpus.jsonl");
        write(out / "report.json", report.str());
      }
    } else if (*rewrite) {
      CorpusH corpus = load_corpus(in, scheme, lenient);
      CorpusH rewritten;
      std::size_t failed = 0;
      check(synsym_rewrite(cfg.get(), corpus.get(), rewritten.out(), &failed));
      save_corpus(rewritten, out / "corpus.jsonl");
      write(out / "report.json", json_count("samples", synsym_corpus_size(rewritten.get()), "rewrite_failed", failed));
    } else if (*backtranslate) {
      CorpusH corpus = load_corpus(in, scheme, lenient);
      CorpusH augmented;
      std::size_t skipped = 0;
      check(synsym_backtranslate(cfg.get(), corpus.get(), pivot.c_str(), identity ? 1 : 0, augmented.out(), &skipped));
      save_corpus(augmented, out / "corpus.jsonl");
      write(out / "report.json", json_count("samples", synsym_corpus_size(augmented.get()), "skipped", skipped));
    } else if (*train) {
      CorpusH corpus = load_corpus(in, scheme, lenient);
      Model model;
      check(synsym_train(cfg.get(), corpus.get(), root_seed(common), model.out()));
      fs::create_directories(out);
      check(synsym_model_save(model.get(), (out / "model.bin").string().c_str()));
      std::cerr << "wrote " << (out / "model.bin").string() << '\n';
    } else if (*evalc) {
      CorpusH corpus = load_corpus(in, scheme, lenient);
      CString report, table, per_class;
      if (!model_path.empty()) {
        Model model;
        check(synsym_model_load(model_path.c_str(), model.out()));
        check(synsym_model_evaluate(model.get(), corpus.get(), threshold, long_mode ? 1 : 0, report.out(),
                                    table.out()));
      } else {
        std::optional<CorpusH> test;
        if (!test_path.empty()) {
          test.emplace(load_corpus(test_path, test_scheme, lenient));
          CString from, to;
          check(synsym_corpus_scheme_name(corpus.get(), from.out()));
          check(synsym_corpus_scheme_name(test->get(), to.out()));
          if (from.str() != to.str()) {
            // Bring the training corpus into the test scheme.
            Remap table;
            check(synsym_remap_load(table_ref.c_str(), table.out()));
            CorpusH remapped;
            CString ignored;
            check(synsym_remap_apply(corpus.get(), table.get(), test_scheme.c_str(), remapped.out(), ignored.out()));
            corpus = std::move(remapped);
          }
        }
        check(synsym_evaluate_protocol(cfg.get(), corpus.get(), test ? test->get() : nullptr, report.out(),
                                       table.out(), per_class.out()));
        write(out / "per_class.csv", per_class.str());
      }
      write(out / "metrics.json", report.str());
      write(out / "table.txt", table.str());
      std::cout << table.str();
    } else if (*cross) {
      std::vector<CorpusRef> rows, cols;
      for (const auto& r : train_refs) rows.push_back(parse_ref(r));
      for (const auto& r : test_refs) cols.push_back(parse_ref(r));
      std::vector<CorpusH> held;
      std::vector<const synsym_corpus*> train_ptrs, test_ptrs;
      std::vector<const char*> train_names, test_names;
      for (const auto& r : rows) {
        held.push_back(load_corpus(r.path, r.scheme, lenient));
        train_ptrs.push_back(held.back().get());
        train_names.push_back(r.name.c_str());
      }
      for (const auto& r : cols) {
        held.push_back(load_corpus(r.path, r.scheme, lenient));
        test_ptrs.push_back(held.back().get());
        test_names.push_back(r.name.c_str());
      }
      Remap table;
      if (table_ref != "none") check(synsym_remap_load(table_ref.c_str(), table.out()));
      CString report, text;
      check(synsym_cross_eval(cfg.get(), train_ptrs.data(), train_names.data(), train_ptrs.size(), test_ptrs.data(),
                              test_names.data(), test_ptrs.size(), table.get(), target.empty() ? nullptr : target.c_str(),
                              report.out(), text.out()));
      write(out / "metrics.json", report.str());
      write(out / "table.txt", text.str());
      std::cout << text.str();
    } else if (*ablate) {
      std::optional<CorpusH> test;
      if (!test_path.empty()) test.emplace(load_corpus(test_path, test_scheme, lenient));
      Remap table;
      if (test) check(synsym_remap_load(table_ref.c_str(), table.out()));
      CString report, text;
      check(synsym_ablate(cfg.get(), test ? test->get() : nullptr, table.get(), report.out(), text.out()));
      write(out / "metrics.json", report.str());
      write(out / "table.txt", text.str());
      std::cout << text.str();
    } else if (*llm) {
      CorpusH corpus = load_corpus(in, scheme, lenient);
      CString preds, report, table;
      check(synsym_llm_classify(cfg.get(), corpus.get(), strategy.c_str(), preds.out(), report.out(), table.out()));
      write(out / "predictions.jsonl", preds.str());
      write(out / "metrics.json", report.str());
      write(out / "table.txt", table.str());
      std::cout << table.str();
    }
  } catch (const Failure& f) {
    std::cerr << "synsym: " << synsym_status_name(f.status) << ": " << f.message << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "synsym: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
