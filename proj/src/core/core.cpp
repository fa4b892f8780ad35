#include "synsym/core.hpp"

#include <algorithm>
#include <cctype>

#include "synsym/embedded.hpp"
#include "synsym/errors.hpp"
#include "synsym/hashing.hpp"
#include "synsym/json_io.hpp"

namespace synsym {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kIo: return "Io";
    case Errc::kSchemaViolation: return "SchemaViolation";
    case Errc::kProviderExhausted: return "ProviderExhausted";
    case Errc::kAuthMissing: return "AuthMissing";
    case Errc::kMalformedReply: return "MalformedReply";
    case Errc::kUnparseableReply: return "UnparseableReply";
    case Errc::kFanoutTooSmall: return "FanoutTooSmall";
    case Errc::kCombinationStall: return "CombinationStall";
    case Errc::kUnscored: return "Unscored";
    case Errc::kUnknownSourceLabel: return "UnknownSourceLabel";
    case Errc::kEmptyCorpus: return "EmptyCorpus";
    case Errc::kTooFewSamples: return "TooFewSamples";
    case Errc::kTranslationFailed: return "TranslationFailed";
    case Errc::kEmptyTrainSet: return "EmptyTrainSet";
    case Errc::kLengthMismatch: return "LengthMismatch";
    case Errc::kNoEvaluableClasses: return "NoEvaluableClasses";
    case Errc::kSchemeMismatch: return "SchemeMismatch";
    case Errc::kTransient: return "Transient";
  }
  return "Unknown";
}

std::string trim(std::string_view text) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && is_space(text[begin])) ++begin;
  while (end > begin && is_space(text[end - 1])) --end;
  return std::string(text.substr(begin, end - begin));
}

namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

LabelScheme::LabelScheme(std::string name, std::vector<std::string> classes)
    : name_(trim(name)) {
  if (name_.empty()) throw Error(Errc::kInvalidArgument, "label scheme needs a name");
  if (classes.empty()) throw Error(Errc::kInvalidArgument, "label scheme " + name_ + " has no classes");
  classes_.reserve(classes.size());
  for (auto& raw : classes) {
    std::string cls = trim(raw);
    if (cls.empty()) throw Error(Errc::kInvalidArgument, "empty class name in scheme " + name_);
    if (!index_.emplace(cls, classes_.size()).second) {
      throw Error(Errc::kInvalidArgument, "duplicate class '" + cls + "' in scheme " + name_);
    }
    classes_.push_back(std::move(cls));
  }
}

LabelScheme LabelScheme::dsm5_14() {
  static const LabelScheme scheme =
      scheme_from_json(Json::parse(embedded::get("schemes/dsm5-14.json")));
  return scheme;
}

LabelScheme LabelScheme::phq9_9() {
  static const LabelScheme scheme =
      scheme_from_json(Json::parse(embedded::get("schemes/phq9-9.json")));
  return scheme;
}

LabelScheme LabelScheme::builtin(std::string_view name) {
  const std::string key = lower(trim(name));
  if (key == "dsm5-14") return dsm5_14();
  if (key == "phq9-9") return phq9_9();
  throw Error(Errc::kInvalidArgument, "unknown builtin scheme '" + std::string(name) + "'");
}

bool LabelScheme::contains(std::string_view cls) const {
  return index_.count(std::string(cls)) != 0;
}

std::optional<std::size_t> LabelScheme::index_of(std::string_view cls) const {
  auto it = index_.find(std::string(cls));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string_view to_string(Style style) {
  return style == Style::kClinical ? "clinical" : "colloquial";
}

std::optional<Style> parse_style(std::string_view text) {
  const std::string key = lower(trim(text));
  if (key == "clinical") return Style::kClinical;
  if (key == "colloquial") return Style::kColloquial;
  return std::nullopt;
}

std::string_view to_string(Severity severity) {
  switch (severity) {
    case Severity::kMild: return "mild";
    case Severity::kModerate: return "moderate";
    case Severity::kSevere: return "severe";
  }
  return "moderate";
}

std::optional<Severity> parse_severity(std::string_view text) {
  const std::string key = lower(trim(text));
  if (key == "mild") return Severity::kMild;
  if (key == "moderate") return Severity::kModerate;
  if (key == "severe") return Severity::kSevere;
  return std::nullopt;
}

std::string SubConcept::id() const {
  std::uint64_t h = fnv1a64(parent);
  h = fnv1a64("\x1f", h);
  h = fnv1a64(text, h);
  return to_hex16(h);
}

std::vector<std::string> validate_symptom_spec(const SymptomSpec& spec, const LabelScheme& scheme) {
  std::vector<std::string> problems;
  if (!scheme.contains(spec.keyword)) {
    problems.push_back("keyword '" + spec.keyword + "' is not a class of " + scheme.name());
  }
  if (trim(spec.description).empty()) {
    problems.push_back("symptom '" + spec.keyword + "' has an empty description");
  }
  std::set<std::string> seen;
  for (const auto& sub : spec.sub_concepts) {
    if (trim(sub.text).empty()) problems.push_back("empty sub-concept under '" + spec.keyword + "'");
    if (sub.parent != spec.keyword) {
      problems.push_back("sub-concept '" + sub.text + "' has parent '" + sub.parent + "'");
    }
    if (!seen.insert(lower(trim(sub.text))).second) {
      problems.push_back("duplicate sub-concept '" + sub.text + "'");
    }
  }
  return problems;
}

Combination Combination::make(std::vector<CombinationMember> members) {
  if (members.size() < kMinCombinationSize || members.size() > kMaxCombinationSize) {
    throw Error(Errc::kInvalidArgument,
                "combination size " + std::to_string(members.size()) + " outside [2, 5]");
  }
  for (auto& m : members) m.symptom = trim(m.symptom);
  std::sort(members.begin(), members.end(),
            [](const auto& a, const auto& b) { return a.symptom < b.symptom; });
  for (std::size_t i = 1; i < members.size(); ++i) {
    if (members[i].symptom == members[i - 1].symptom) {
      throw Error(Errc::kInvalidArgument, "combination repeats '" + members[i].symptom + "'");
    }
  }
  std::uint64_t h = fnv1a64("combination");
  for (const auto& m : members) {
    h = fnv1a64("\x1e", h);
    h = fnv1a64(m.symptom, h);
    h = fnv1a64("\x1f", h);
    h = fnv1a64(to_string(m.severity), h);
  }
  Combination c;
  c.members_ = std::move(members);
  c.id_ = to_hex16(h);
  return c;
}

LabelSet Combination::labels() const {
  LabelSet out;
  for (const auto& m : members_) out.insert(m.symptom);
  return out;
}

namespace {

std::uint64_t hash_labels(const LabelSet& labels, std::uint64_t h) {
  for (const auto& l : labels) {
    h = fnv1a64("\x1e", h);
    h = fnv1a64(l, h);
  }
  return h;
}

}  // namespace

std::string expression_id(std::string_view text, const LabelSet& labels, Style style) {
  std::uint64_t h = fnv1a64(text);
  h = fnv1a64("\x1f", h);
  h = hash_labels(labels, h);
  h = fnv1a64("\x1f", h);
  h = fnv1a64(to_string(style), h);
  return to_hex16(h);
}

std::string sample_id(std::string_view text, const LabelSet& labels, std::string_view source) {
  std::uint64_t h = fnv1a64(text);
  h = fnv1a64("\x1f", h);
  h = hash_labels(labels, h);
  h = fnv1a64("\x1f", h);
  h = fnv1a64(source, h);
  return to_hex16(h);
}

Sample make_sample(std::string text, LabelSet labels, std::string source, std::string scheme) {
  Sample s;
  s.id = sample_id(text, labels, source);
  s.text = std::move(text);
  s.labels = std::move(labels);
  s.source = std::move(source);
  s.scheme = std::move(scheme);
  return s;
}

Sample to_sample(const Expression& expr, const LabelScheme& scheme) {
  return make_sample(expr.text, expr.labels, std::string(kSourceSynsym), scheme.name());
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kEmptyId: return "empty id";
    case ViolationKind::kEmptyText: return "empty text";
    case ViolationKind::kUnknownLabel: return "unknown label";
    case ViolationKind::kSchemeMismatch: return "scheme mismatch";
    case ViolationKind::kEmptyLabels: return "empty labels";
    case ViolationKind::kDuplicateId: return "duplicate id";
  }
  return "violation";
}

std::string Violation::describe() const {
  std::string out(to_string(kind));
  if (!detail.empty()) out += ": " + detail;
  return out;
}

std::vector<Violation> validate_sample(const Sample& sample, const LabelScheme& scheme,
                                       const std::unordered_set<std::string>* seen_ids) {
  std::vector<Violation> out;
  if (sample.id.empty()) out.push_back({ViolationKind::kEmptyId, {}});
  if (trim(sample.text).empty()) out.push_back({ViolationKind::kEmptyText, {}});
  if (sample.scheme != scheme.name()) {
    out.push_back({ViolationKind::kSchemeMismatch, "'" + sample.scheme + "' vs '" + scheme.name() + "'"});
  }
  for (const auto& label : sample.labels) {
    if (!scheme.contains(label)) out.push_back({ViolationKind::kUnknownLabel, label});
  }
  // Only real benchmark rows may be symptom-free.
  if (sample.labels.empty() && sample.source == kSourceSynsym) {
    out.push_back({ViolationKind::kEmptyLabels, "synthetic samples need at least one label"});
  }
  if (seen_ids != nullptr && seen_ids->count(sample.id) != 0) {
    out.push_back({ViolationKind::kDuplicateId, sample.id});
  }
  return out;
}

void check_corpus(const Corpus& corpus) {
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < corpus.samples.size(); ++i) {
    const auto& s = corpus.samples[i];
    auto violations = validate_sample(s, corpus.scheme, &seen);
    if (!violations.empty()) {
      throw Error(Errc::kSchemaViolation,
                  "sample " + std::to_string(i) + " (" + s.id + "): " + violations.front().describe());
    }
    seen.insert(s.id);
  }
}

}  // namespace synsym
