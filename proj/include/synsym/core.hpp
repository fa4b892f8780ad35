#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace synsym {

using LabelSet = std::set<std::string>;

inline constexpr std::string_view kSourceSynsym = "synsym";
inline constexpr std::string_view kSourceAugmented = "augmented";
inline constexpr std::string_view kSourceRewritten = "d2s-rewritten";

/// Trims surrounding whitespace. Class names are compared exactly after this.
std::string trim(std::string_view text);

/// Ordered, duplicate-free list of class names under a scheme name.
class LabelScheme {
 public:
  LabelScheme(std::string name, std::vector<std::string> classes);

  static LabelScheme dsm5_14();
  static LabelScheme phq9_9();
  /// Resolves "DSM5-14" / "PHQ9-9" (case-insensitive); throws InvalidArgument.
  static LabelScheme builtin(std::string_view name);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& classes() const { return classes_; }
  std::size_t size() const { return classes_.size(); }
  bool contains(std::string_view cls) const;
  std::optional<std::size_t> index_of(std::string_view cls) const;

  bool operator==(const LabelScheme& other) const {
    return name_ == other.name_ && classes_ == other.classes_;
  }

 private:
  std::string name_;
  std::vector<std::string> classes_;
  std::unordered_map<std::string, std::size_t> index_;
};

enum class Style { kClinical, kColloquial };
std::string_view to_string(Style style);
std::optional<Style> parse_style(std::string_view text);

enum class Severity { kMild, kModerate, kSevere };
std::string_view to_string(Severity severity);
std::optional<Severity> parse_severity(std::string_view text);

struct SubConcept {
  std::string text;
  std::string parent;

  std::string id() const;
  bool operator==(const SubConcept&) const = default;
};

struct SymptomSpec {
  std::string keyword;
  std::string description;
  std::vector<SubConcept> sub_concepts;

  bool operator==(const SymptomSpec&) const = default;
};

/// Problems with a spec under a scheme; empty when valid.
std::vector<std::string> validate_symptom_spec(const SymptomSpec& spec, const LabelScheme& scheme);

struct CombinationMember {
  std::string symptom;
  Severity severity = Severity::kModerate;

  bool operator==(const CombinationMember&) const = default;
};

inline constexpr std::size_t kMinCombinationSize = 2;
inline constexpr std::size_t kMaxCombinationSize = 5;

/// A 2-5 member symptom set with severities. Members are kept sorted by name,
/// and the id hashes the sorted (name, severity) pairs.
class Combination {
 public:
  /// Throws InvalidArgument on size out of range or repeated members.
  static Combination make(std::vector<CombinationMember> members);

  const std::vector<CombinationMember>& members() const { return members_; }
  const std::string& id() const { return id_; }
  std::size_t size() const { return members_.size(); }
  LabelSet labels() const;

  bool operator==(const Combination&) const = default;

 private:
  std::vector<CombinationMember> members_;
  std::string id_;
};

struct Provenance {
  std::vector<std::string> sub_concept_ids;
  std::optional<std::string> combination_id;
  int batch_index = 0;
  std::string provider_id;

  bool operator==(const Provenance&) const = default;
};

struct Expression {
  std::string id;
  std::string text;
  Style style = Style::kClinical;
  LabelSet labels;
  Provenance provenance;
  std::optional<int> quality_score;

  bool operator==(const Expression&) const = default;
};

std::string expression_id(std::string_view text, const LabelSet& labels, Style style);

struct Sample {
  std::string id;
  std::string text;
  LabelSet labels;
  std::string source;
  std::string scheme;
  // Optional annotations (rewrite lineage, failure flags). Serialized only when non-empty.
  std::map<std::string, std::string> meta;

  bool operator==(const Sample&) const = default;
};

/// Content id: FNV-1a over text, sorted labels and source, 16 hex chars.
std::string sample_id(std::string_view text, const LabelSet& labels, std::string_view source);

Sample make_sample(std::string text, LabelSet labels, std::string source, std::string scheme);

/// Text and labels are carried over unchanged; source is "synsym".
Sample to_sample(const Expression& expr, const LabelScheme& scheme);

enum class ViolationKind { kEmptyId, kEmptyText, kUnknownLabel, kSchemeMismatch, kEmptyLabels, kDuplicateId };
std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string detail;

  std::string describe() const;
};

/// Every invariant violation of `sample` under `scheme`. When `seen_ids` is
/// given, an id already in the set is reported as a duplicate.
std::vector<Violation> validate_sample(const Sample& sample, const LabelScheme& scheme,
                                       const std::unordered_set<std::string>* seen_ids = nullptr);

struct Corpus {
  LabelScheme scheme;
  std::vector<Sample> samples;
  std::map<std::string, std::string> metadata;

  explicit Corpus(LabelScheme s) : scheme(std::move(s)) {}

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  bool operator==(const Corpus&) const = default;
};

/// Throws SchemaViolation if any sample breaks the corpus invariants.
void check_corpus(const Corpus& corpus);

}  // namespace synsym
