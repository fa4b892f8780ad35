#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "support.hpp"
#include "synsym/dataset.hpp"
#include "synsym/errors.hpp"

using namespace synsym;
using namespace synsym::data;

namespace {

Corpus toy_corpus(int n) {
  Corpus c(testing::toy_scheme());
  for (int i = 0; i < n; ++i) {
    c.samples.push_back(make_sample("text number " + std::to_string(i), {i % 2 ? "A" : "B"}, "real", "TOY-2"));
  }
  return c;
}

// Reverses text on the way out and back again on the way home.
class ReversingTranslator final : public Translator {
 public:
  std::string translate(std::string_view text, std::string_view, std::string_view) override {
    return std::string(text.rbegin(), text.rend());
  }
};

class FailingTranslator final : public Translator {
 public:
  std::string translate(std::string_view text, std::string_view, std::string_view) override {
    if (text.find("bad") != std::string_view::npos) throw std::runtime_error("boom");
    return std::string(text);
  }
};

}  // namespace

TEST_SUITE("dataset") {
  TEST_CASE("jsonl round trip") {
    auto c = toy_corpus(6);
    c.samples[0].meta["note"] = "x";
    const auto text = to_jsonl(c);
    const auto back = parse_jsonl(text, c.scheme, LoadMode::kStrict);
    CHECK(back.corpus.samples == c.samples);
    CHECK(back.dropped.empty());

    testing::TempDir dir;
    save_jsonl(c, dir / "c.jsonl");
    CHECK(load_jsonl(dir / "c.jsonl", c.scheme, LoadMode::kStrict).corpus.samples == c.samples);
  }

  TEST_CASE("strict mode names the bad line, lenient mode drops it") {
    auto c = toy_corpus(3);
    auto lines = to_jsonl(c);
    lines += "{\"id\":\"zz\",\"text\":\"x\",\"labels\":[\"C\"],\"source\":\"real\",\"scheme\":\"TOY-2\"}\n";
    lines += "not json\n";
    try {
      parse_jsonl(lines, c.scheme, LoadMode::kStrict);
      FAIL("expected SchemaViolation");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::kSchemaViolation);
      CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }
    const auto lenient = parse_jsonl(lines, c.scheme, LoadMode::kLenient);
    CHECK(lenient.corpus.size() == 3);
    REQUIRE(lenient.dropped.size() == 2);
    CHECK(lenient.dropped[0].line == 4);
    CHECK(lenient.dropped[1].line == 5);
  }

  TEST_CASE("duplicate ids are rejected") {
    auto c = toy_corpus(2);
    c.samples.push_back(c.samples[0]);
    CHECK_THROWS_AS(parse_jsonl(to_jsonl(c), c.scheme, LoadMode::kStrict), Error);
    CHECK(parse_jsonl(to_jsonl(c), c.scheme, LoadMode::kLenient).corpus.size() == 2);
  }

  TEST_CASE("shipped remap table: every DSM5-14 class") {
    const auto table = RemapTable::dsm5_to_phq9();
    const auto dsm = LabelScheme::dsm5_14();
    const auto phq = LabelScheme::phq9_9();
    CHECK_NOTHROW(table.check(dsm, phq));
    const std::map<std::string, std::optional<std::string>> golden{
        {"Anger Irritability", std::nullopt},
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
    CHECK(golden.size() == dsm.size());
    for (const auto& cls : dsm.classes()) {
      CAPTURE(cls);
      const auto hit = table.lookup(cls);
      REQUIRE(hit.has_value());
      CHECK(*hit == golden.at(cls));
    }
    CHECK(table.lookup("Decreased Energy or Fatigue") == table.lookup("Decreased Energy, Tiredness, Fatigue"));
    CHECK(table.lookup("Anger or Irritability") == table.lookup("Anger Irritability"));
    CHECK_FALSE(table.lookup("Happiness").has_value());
  }

  TEST_CASE("remap_labels merges and excludes") {
    const auto table = RemapTable::dsm5_to_phq9();
    CHECK(remap_labels({"Inattention", "Poor Memory", "Indecisiveness"}, table) == LabelSet{"Concentration Problems"});
    CHECK(remap_labels({"Anger Irritability"}, table).empty());
    CHECK(remap_labels({"Depressed Mood", "Pessimism", "Anger Irritability"}, table) == LabelSet{"Feeling Down"});
    try {
      remap_labels({"Happiness"}, table);
      FAIL("expected UnknownSourceLabel");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::kUnknownSourceLabel);
    }
  }

  TEST_CASE("remap_corpus drops emptied synthetic rows and recomputes ids") {
    Corpus c(LabelScheme::dsm5_14());
    c.samples.push_back(make_sample("angry", {"Anger Irritability"}, "synsym", "DSM5-14"));
    c.samples.push_back(make_sample("sad and hopeless", {"Depressed Mood", "Pessimism"}, "synsym", "DSM5-14"));
    c.samples.push_back(make_sample("cannot sleep", {"Sleep Disturbance"}, "synsym", "DSM5-14"));
    RemapStats stats;
    const auto out = remap_corpus(c, RemapTable::dsm5_to_phq9(), LabelScheme::phq9_9(), &stats);
    CHECK(stats.emptied == 1);
    REQUIRE(out.size() == 2);
    CHECK(out.scheme.name() == "PHQ9-9");
    CHECK(out.samples[0].labels == LabelSet{"Feeling Down"});
    CHECK(out.samples[0].id == sample_id("sad and hopeless", {"Feeling Down"}, "synsym"));
    CHECK_NOTHROW(check_corpus(out));

    const RemapTable partial(std::vector<RemapEntry>{{"A", "X", {}}});
    CHECK_THROWS_AS(partial.check(testing::toy_scheme(), LabelScheme("T", {"X"})), Error);
  }

  TEST_CASE("remap table json and validation") {
    const auto table = RemapTable::dsm5_to_phq9();
    CHECK(RemapTable::from_json(table.to_json()).entries() == table.entries());
    CHECK_THROWS_AS(RemapTable(std::vector<RemapEntry>{{"A", "X", {}}, {"A", "Y", {}}}), Error);
    CHECK_THROWS_AS(RemapTable(std::vector<RemapEntry>{{"A", "X", {"B"}}, {"B", "Y", {}}}), Error);
  }

  TEST_CASE("concat keeps the first copy and rejects mixed schemes") {
    auto a = toy_corpus(4);
    auto b = toy_corpus(6);
    const auto joined = concat_corpora({a, b});
    CHECK(joined.size() == 6);
    CHECK_THROWS_AS(concat_corpora({a, Corpus(LabelScheme::dsm5_14())}), Error);
  }

  TEST_CASE("corpus statistics reproduce the published distribution") {
    const auto scheme = LabelScheme::dsm5_14();
    const std::vector<std::size_t> counts{1294, 2106, 4829, 1186, 1569, 2054, 1320,
                                          2012, 2294, 2703, 1958, 1374, 2981, 1993};
    std::vector<std::string> tokens;
    for (std::size_t c = 0; c < counts.size(); ++c) tokens.insert(tokens.end(), counts[c], scheme.classes()[c]);
    REQUIRE(tokens.size() == 29673);
    const std::size_t n_single = 12621, n_multi = 5633;
    Corpus corpus(scheme);
    for (std::size_t i = 0; i < n_single; ++i) {
      corpus.samples.push_back(make_sample("single " + std::to_string(i), {tokens[i]}, "synsym", scheme.name()));
    }
    const std::size_t rest = tokens.size() - n_single;
    for (std::size_t j = 0; j < n_multi; ++j) {
      LabelSet labels;
      std::size_t taken = 0;
      for (std::size_t p = j; p < rest; p += n_multi, ++taken) labels.insert(tokens[n_single + p]);
      REQUIRE(labels.size() == taken);
      corpus.samples.push_back(make_sample("multi " + std::to_string(j), labels, "synsym", scheme.name()));
    }
    const auto stats = compute_stats(corpus);
    CHECK(stats.n_samples == 18254);
    CHECK(stats.n_classes == 14);
    CHECK(stats.avg_samples_per_class == doctest::Approx(2119.5));
    CHECK(stats.max_samples_per_class == 4829);
    CHECK(stats.min_samples_per_class == 1186);
    CHECK(std::round(stats.avg_symptoms_per_sample * 10) / 10 == doctest::Approx(1.6));
    for (std::size_t c = 0; c < counts.size(); ++c) {
      CHECK(stats.per_class[c].first == scheme.classes()[c]);
      CHECK(stats.per_class[c].second == counts[c]);
    }
    const auto table = format_stats_table(stats);
    CHECK(table.find("2119.5") != std::string::npos);
    CHECK(table.find("4829") != std::string::npos);
    CHECK(to_json(stats)["n_samples"] == 18254);
  }

  TEST_CASE("stats on an empty corpus throw") {
    try {
      compute_stats(Corpus(testing::toy_scheme()));
      FAIL("expected EmptyCorpus");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::kEmptyCorpus);
    }
    CHECK(whitespace_word_count("  a b\tc\n d ") == 4);
  }

  TEST_CASE("kfold partitions every id exactly once") {
    for (int n : {5, 17, 100}) {
      for (int k : {2, 5}) {
        const auto c = toy_corpus(n);
        const auto plan = kfold_split(c, k, 7);
        REQUIRE(plan.folds.size() == static_cast<std::size_t>(k));
        std::multiset<std::string> all;
        std::size_t lo = n, hi = 0;
        for (const auto& f : plan.folds) {
          all.insert(f.begin(), f.end());
          lo = std::min(lo, f.size());
          hi = std::max(hi, f.size());
        }
        CHECK(all.size() == static_cast<std::size_t>(n));
        CHECK(std::set<std::string>(all.begin(), all.end()).size() == all.size());
        CHECK(hi - lo <= 1);
        for (std::size_t f = 0; f < plan.folds.size(); ++f) {
          const auto [train, test] = fold_partition(c, plan, f);
          CHECK(train.size() + test.size() == c.size());
          CHECK(test.size() == plan.folds[f].size());
        }
      }
    }
  }

  TEST_CASE("kfold depends only on the id set and seed") {
    auto c = toy_corpus(30);
    const auto a = kfold_split(c, 5, 42);
    std::reverse(c.samples.begin(), c.samples.end());
    const auto b = kfold_split(c, 5, 42);
    CHECK(a.folds == b.folds);
    CHECK_FALSE(kfold_split(c, 5, 43).folds == a.folds);
    CHECK_THROWS_AS(kfold_split(toy_corpus(3), 5, 1), Error);
    CHECK_THROWS_AS(kfold_split(c, 1, 1), Error);
  }

  TEST_CASE("train/validation split ratio") {
    const auto c = toy_corpus(50);
    const auto [train, val] = train_val_split(c, 0.8, 42);
    CHECK(train.size() == 40);
    CHECK(val.size() == 10);
    const auto again = train_val_split(c, 0.8, 42);
    CHECK(again.first.samples == train.samples);
  }

  TEST_CASE("figurative rewrite keeps labels and records lineage") {
    llm::Gateway gw(llm::mock_provider(1));
    const auto s = make_sample("I am tired", {"A"}, "real", "TOY-2");
    const auto r = rewrite_figurative(s, gw);
    CHECK(r.text == "Put plainly: I am tired");
    CHECK(r.labels == s.labels);
    CHECK(r.source == "d2s-rewritten");
    CHECK(r.meta.at("original_text") == s.text);
    CHECK(r.meta.at("parent_id") == s.id);
    CHECK(gw.requests(llm::Stage::kRewrite) == 1);

    llm::Gateway bad(llm::mock_provider(1, {{"rewrite", "@malformed"}}));
    const auto f = rewrite_figurative(s, bad);
    CHECK(f.text == s.text);
    CHECK(f.meta.at("rewrite_failed") == "true");

    const auto all = rewrite_all({s, make_sample("second", {"B"}, "real", "TOY-2")}, gw);
    REQUIRE(all.size() == 2);
    CHECK(all[1].text == "Put plainly: second");
  }

  TEST_CASE("identity back-translation doubles the corpus with the same labels") {
    const auto c = toy_corpus(8);
    IdentityTranslator id;
    const auto out = augment_with_backtranslation(c, id);
    REQUIRE(out.corpus.size() == 16);
    CHECK(out.skipped == 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      CHECK(out.corpus.samples[i] == c.samples[i]);
      const auto& copy = out.corpus.samples[c.size() + i];
      CHECK(copy.labels == c.samples[i].labels);
      CHECK(copy.text == c.samples[i].text);
      CHECK(copy.source == "augmented");
      CHECK(copy.meta.at("parent_id") == c.samples[i].id);
    }
    CHECK_NOTHROW(check_corpus(out.corpus));
  }

  TEST_CASE("inverse translators round-trip the text") {
    ReversingTranslator rev;
    CHECK(back_translate("hello world", rev) == "hello world");
    const auto out = augment_with_backtranslation(toy_corpus(4), rev, "fr");
    for (std::size_t i = 0; i < 4; ++i) CHECK(out.corpus.samples[4 + i].text == out.corpus.samples[i].text);
  }

  TEST_CASE("translation failures are skipped") {
    auto c = toy_corpus(3);
    c.samples.push_back(make_sample("a bad one", {"A"}, "real", "TOY-2"));
    FailingTranslator failing;
    const auto out = augment_with_backtranslation(c, failing);
    CHECK(out.skipped == 1);
    CHECK(out.corpus.size() == 7);
    try {
      back_translate("bad", failing);
      FAIL("expected TranslationFailed");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::kTranslationFailed);
    }
  }

  TEST_CASE("llm translator goes through the rewrite stage") {
    llm::Gateway gw(llm::mock_provider(2));
    LlmTranslator tr(gw);
    CHECK(back_translate("it is fine", tr) == "it is fine");
    CHECK(gw.requests(llm::Stage::kRewrite) == 2);
    llm::Gateway fixed(llm::mock_provider(2, {{"translate:en-de", "Es geht"}}));
    LlmTranslator tr2(fixed);
    CHECK(tr2.translate("it is fine", "en", "de") == "Es geht");
  }
}
