#include <algorithm>
#include <set>

#include "doctest.h"
#include "support.hpp"
#include "synsym/core.hpp"
#include "synsym/errors.hpp"
#include "synsym/hashing.hpp"

using namespace synsym;

TEST_SUITE("core") {
  TEST_CASE("fnv1a64 matches published test vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
    CHECK(to_hex16(0xabcULL) == "0000000000000abc");
  }

  TEST_CASE("derived seeds are stable and label dependent") {
    CHECK(derive_seed(42, "kfold") == derive_seed(42, "kfold"));
    CHECK(derive_seed(42, "kfold") != derive_seed(42, "train-val"));
    CHECK(derive_seed(42, "kfold") != derive_seed(43, "kfold"));
  }

  TEST_CASE("bounded draws stay in range and shuffles are permutations") {
    Rng rng(7);
    for (std::uint64_t bound : {1ULL, 2ULL, 3ULL, 10ULL, 1000ULL}) {
      for (int i = 0; i < 200; ++i) CHECK(rng.below(bound) < bound);
    }
    for (int i = 0; i < 100; ++i) {
      const double u = rng.unit();
      CHECK(u >= 0.0);
      CHECK(u < 1.0);
    }
    std::vector<int> items(50);
    for (int i = 0; i < 50; ++i) items[i] = i;
    auto shuffled = items;
    Rng(3).shuffle(shuffled);
    auto again = items;
    Rng(3).shuffle(again);
    CHECK(shuffled == again);
    CHECK(shuffled != items);
    std::sort(shuffled.begin(), shuffled.end());
    CHECK(shuffled == items);
  }

  TEST_CASE("builtin schemes") {
    const auto dsm = LabelScheme::dsm5_14();
    CHECK(dsm.name() == "DSM5-14");
    CHECK(dsm.size() == 14);
    CHECK(dsm.contains("Depressed Mood"));
    CHECK(dsm.contains("Weight and Appetite Change"));
    const auto phq = LabelScheme::phq9_9();
    CHECK(phq.size() == 9);
    CHECK(phq.contains("Concentration Problems"));
    CHECK(phq.index_of("Lack of Interest") == std::optional<std::size_t>(0));
    CHECK(LabelScheme::builtin("phq9-9") == phq);
    CHECK_THROWS_AS(LabelScheme::builtin("nope"), Error);
  }

  TEST_CASE("scheme construction rejects duplicates and empties") {
    CHECK_THROWS_AS(LabelScheme("X", {"a", "a"}), Error);
    CHECK_THROWS_AS(LabelScheme("X", {"a", " a "}), Error);
    CHECK_THROWS_AS(LabelScheme("X", {}), Error);
    CHECK_THROWS_AS(LabelScheme("", {"a"}), Error);
    CHECK(LabelScheme("X", {" a ", "b"}).contains("a"));
  }

  TEST_CASE("combinations are sorted, sized 2..5 and order independent") {
    auto c1 = Combination::make({{"Pessimism", Severity::kMild}, {"Depressed Mood", Severity::kSevere}});
    auto c2 = Combination::make({{"Depressed Mood", Severity::kSevere}, {"Pessimism", Severity::kMild}});
    CHECK(c1.id() == c2.id());
    CHECK(c1.members().front().symptom == "Depressed Mood");
    CHECK(c1.labels() == LabelSet{"Depressed Mood", "Pessimism"});
    auto c3 = Combination::make({{"Pessimism", Severity::kModerate}, {"Depressed Mood", Severity::kSevere}});
    CHECK(c3.id() != c1.id());
    CHECK_THROWS_AS(Combination::make({{"A", Severity::kMild}}), Error);
    CHECK_THROWS_AS(Combination::make({{"A", Severity::kMild}, {"A", Severity::kSevere}}), Error);
    std::vector<CombinationMember> six;
    for (const char* n : {"a", "b", "c", "d", "e", "f"}) six.push_back({n, Severity::kMild});
    CHECK_THROWS_AS(Combination::make(six), Error);
    six.pop_back();
    CHECK(Combination::make(six).size() == 5);
  }

  TEST_CASE("style and severity parsing") {
    CHECK(parse_style("clinical") == Style::kClinical);
    CHECK(parse_style("Colloquial") == Style::kColloquial);
    CHECK_FALSE(parse_style("formal").has_value());
    CHECK(parse_severity("severe") == Severity::kSevere);
    CHECK(to_string(Severity::kMild) == "mild");
  }

  TEST_CASE("sample ids depend on content, labels and source only") {
    auto a = make_sample("I can't sleep", {"Sleep Disturbance"}, "real", "DSM5-14");
    auto b = make_sample("I can't sleep", {"Sleep Disturbance"}, "real", "PHQ9-9");
    auto c = make_sample("I can't sleep", {"Sleep Disturbance"}, "synsym", "DSM5-14");
    auto d = make_sample("I can't sleep", {"Sleep Disturbance", "Depressed Mood"}, "real", "DSM5-14");
    CHECK(a.id.size() == 16);
    CHECK(a.id == b.id);
    CHECK(a.id != c.id);
    CHECK(a.id != d.id);
  }

  TEST_CASE("sample validation") {
    const auto dsm = LabelScheme::dsm5_14();
    auto ok = make_sample("text", {"Depressed Mood"}, "real", "DSM5-14");
    CHECK(validate_sample(ok, dsm).empty());

    auto bad = make_sample("  ", {"Happiness"}, "real", "PHQ9-9");
    auto v = validate_sample(bad, dsm);
    std::set<ViolationKind> kinds;
    for (const auto& x : v) kinds.insert(x.kind);
    CHECK(kinds == std::set<ViolationKind>{ViolationKind::kEmptyText, ViolationKind::kUnknownLabel,
                                           ViolationKind::kSchemeMismatch});

    // Real posts may carry no symptom; synthetic samples may not.
    CHECK(validate_sample(make_sample("fine", {}, "real", "DSM5-14"), dsm).empty());
    CHECK(validate_sample(make_sample("fine", {}, "synsym", "DSM5-14"), dsm).size() == 1);

    std::unordered_set<std::string> seen{ok.id};
    CHECK(validate_sample(ok, dsm, &seen).front().kind == ViolationKind::kDuplicateId);
  }

  TEST_CASE("corpus check reports the first violation") {
    Corpus corpus(LabelScheme::dsm5_14());
    corpus.samples.push_back(make_sample("one", {"Depressed Mood"}, "real", "DSM5-14"));
    CHECK_NOTHROW(check_corpus(corpus));
    corpus.samples.push_back(corpus.samples.front());
    try {
      check_corpus(corpus);
      FAIL("expected SchemaViolation");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::kSchemaViolation);
    }
  }

  TEST_CASE("error names") {
    CHECK(errc_name(Errc::kNoEvaluableClasses) == "NoEvaluableClasses");
    CHECK(Error(Errc::kIo, "x").code() == Errc::kIo);
  }
}
