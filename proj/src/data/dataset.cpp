#include "synsym/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "synsym/embedded.hpp"
#include "synsym/errors.hpp"
#include "synsym/hashing.hpp"

namespace synsym::data {

// ---- JSONL ------------------------------------------------------------------

LoadResult parse_jsonl(const std::string& content, const LabelScheme& scheme, LoadMode mode) {
  LoadResult result{Corpus(scheme), {}};
  std::unordered_set<std::string> seen;
  std::istringstream in(content);
  std::string line;
  std::size_t line_no = 0;

  auto reject = [&](const std::string& message) {
    if (mode == LoadMode::kStrict) {
      throw Error(Errc::kSchemaViolation, "line " + std::to_string(line_no) + ": " + message);
    }
    std::cerr << "synsym: dropped line " << line_no << ": " << message << '\n';
    result.dropped.push_back({line_no, message});
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    Sample sample;
    try {
      sample = sample_from_json(Json::parse(line));
    } catch (const Json::exception& e) {
      reject(std::string("malformed JSON: ") + e.what());
      continue;
    } catch (const Error& e) {
      reject(e.what());
      continue;
    }
    auto violations = validate_sample(sample, scheme, &seen);
    if (!violations.empty()) {
      std::string message;
      for (const auto& v : violations) message += (message.empty() ? "" : "; ") + v.describe();
      reject(message);
      continue;
    }
    seen.insert(sample.id);
    result.corpus.samples.push_back(std::move(sample));
  }
  return result;
}

LoadResult load_jsonl(const std::filesystem::path& path, const LabelScheme& scheme, LoadMode mode) {
  return parse_jsonl(read_file(path), scheme, mode);
}

std::string to_jsonl(const Corpus& corpus) {
  std::string out;
  for (const auto& s : corpus.samples) {
    out += synsym::to_json(s).dump();
    out += '\n';
  }
  return out;
}

void save_jsonl(const Corpus& corpus, const std::filesystem::path& path) {
  write_file(path, to_jsonl(corpus));
}

// ---- label remapping ----------------------------------------------------------

RemapTable::RemapTable(std::vector<RemapEntry> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    auto& e = entries_[i];
    e.from = trim(e.from);
    if (e.from.empty()) throw Error(Errc::kInvalidArgument, "remap entry with empty source label");
    if (e.to) e.to = trim(*e.to);
    std::vector<std::string> names{e.from};
    for (auto& a : e.aliases) {
      a = trim(a);
      names.push_back(a);
    }
    for (const auto& n : names) {
      if (!by_name_.emplace(n, i).second) {
        throw Error(Errc::kInvalidArgument, "remap table lists '" + n + "' more than once");
      }
    }
  }
}

RemapTable RemapTable::dsm5_to_phq9() {
  static const RemapTable table = from_json(Json::parse(embedded::get("remap/dsm5_to_phq9.json")));
  return table;
}

RemapTable RemapTable::identity(const LabelScheme& scheme) {
  std::vector<RemapEntry> entries;
  for (const auto& c : scheme.classes()) entries.push_back({c, c, {}});
  return RemapTable(std::move(entries));
}

RemapTable RemapTable::load(const std::string& ref) {
  if (ref == "default") return dsm5_to_phq9();
  Json j;
  try {
    j = Json::parse(read_file(ref));
  } catch (const Json::exception& e) {
    throw Error(Errc::kSchemaViolation, ref + ": " + e.what());
  }
  return from_json(j);
}

RemapTable RemapTable::from_json(const Json& j) {
  if (!j.is_array()) throw Error(Errc::kSchemaViolation, "remap table must be a JSON array");
  std::vector<RemapEntry> entries;
  for (const auto& item : j) {
    if (!item.is_object() || !item.contains("from") || !item.contains("to") || !item["from"].is_string() ||
        !item["to"].is_string()) {
      throw Error(Errc::kSchemaViolation, "remap entries need string 'from' and 'to'");
    }
    RemapEntry e;
    e.from = item["from"].get<std::string>();
    const std::string to = item["to"].get<std::string>();
    if (to != kExcluded) e.to = to;
    if (auto it = item.find("aliases"); it != item.end()) {
      if (!it->is_array()) throw Error(Errc::kSchemaViolation, "remap 'aliases' must be an array");
      e.aliases = it->get<std::vector<std::string>>();
    }
    entries.push_back(std::move(e));
  }
  return RemapTable(std::move(entries));
}

Json RemapTable::to_json() const {
  Json arr = Json::array();
  for (const auto& e : entries_) {
    Json item{{"from", e.from}, {"to", e.to ? *e.to : std::string(kExcluded)}};
    if (!e.aliases.empty()) item["aliases"] = e.aliases;
    arr.push_back(item);
  }
  return arr;
}

std::optional<std::optional<std::string>> RemapTable::lookup(std::string_view label) const {
  auto it = by_name_.find(trim(label));
  if (it == by_name_.end()) return std::nullopt;
  return entries_[it->second].to;
}

void RemapTable::check(const LabelScheme& source, const LabelScheme& target) const {
  for (const auto& cls : source.classes()) {
    if (!lookup(cls)) {
      throw Error(Errc::kSchemeMismatch, "remap table has no entry for " + source.name() + " class '" + cls + "'");
    }
  }
  for (const auto& e : entries_) {
    if (e.to && !target.contains(*e.to)) {
      throw Error(Errc::kSchemeMismatch, "remap target '" + *e.to + "' is not a class of " + target.name());
    }
  }
}

LabelSet remap_labels(const LabelSet& labels, const RemapTable& table) {
  LabelSet out;
  for (const auto& l : labels) {
    auto target = table.lookup(l);
    if (!target) throw Error(Errc::kUnknownSourceLabel, "no remap entry for label '" + l + "'");
    if (*target) out.insert(**target);
  }
  return out;
}

Corpus remap_corpus(const Corpus& corpus, const RemapTable& table, const LabelScheme& target, RemapStats* stats) {
  table.check(corpus.scheme, target);
  Corpus out(target);
  out.metadata = corpus.metadata;
  std::unordered_set<std::string> seen;
  for (const auto& s : corpus.samples) {
    LabelSet labels = remap_labels(s.labels, table);
    if (labels.empty() && s.source == kSourceSynsym) {
      if (stats) ++stats->emptied;
      continue;
    }
    Sample r = make_sample(s.text, std::move(labels), s.source, target.name());
    r.meta = s.meta;
    if (!seen.insert(r.id).second) {
      if (stats) ++stats->duplicates;
      continue;
    }
    out.samples.push_back(std::move(r));
  }
  return out;
}

Corpus concat_corpora(const std::vector<Corpus>& corpora) {
  if (corpora.empty()) throw Error(Errc::kInvalidArgument, "nothing to concatenate");
  Corpus out(corpora.front().scheme);
  std::unordered_set<std::string> seen;
  for (const auto& c : corpora) {
    if (!(c.scheme == out.scheme)) {
      throw Error(Errc::kSchemeMismatch, "cannot concatenate " + c.scheme.name() + " with " + out.scheme.name());
    }
    for (const auto& s : c.samples) {
      if (seen.insert(s.id).second) out.samples.push_back(s);
    }
  }
  return out;
}

// ---- statistics -------------------------------------------------------------

std::size_t whitespace_word_count(std::string_view text) {
  std::size_t count = 0;
  bool in_word = false;
  for (unsigned char c : text) {
    const bool space = std::isspace(c) != 0;
    if (!space && !in_word) ++count;
    in_word = !space;
  }
  return count;
}

CorpusStats compute_stats(const Corpus& corpus) {
  if (corpus.empty()) throw Error(Errc::kEmptyCorpus, "statistics need at least one sample");
  CorpusStats st;
  st.n_samples = corpus.size();
  st.n_classes = corpus.scheme.size();
  std::vector<std::size_t> counts(corpus.scheme.size(), 0);
  std::size_t words = 0;
  std::size_t labels = 0;
  for (const auto& s : corpus.samples) {
    words += whitespace_word_count(s.text);
    labels += s.labels.size();
    for (const auto& l : s.labels) {
      if (auto idx = corpus.scheme.index_of(l)) ++counts[*idx];
    }
  }
  const auto n = static_cast<double>(st.n_samples);
  st.avg_post_length = static_cast<double>(words) / n;
  st.avg_symptoms_per_sample = static_cast<double>(labels) / n;
  std::size_t total = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    st.per_class.emplace_back(corpus.scheme.classes()[i], counts[i]);
    total += counts[i];
  }
  st.avg_samples_per_class = static_cast<double>(total) / static_cast<double>(counts.size());
  st.max_samples_per_class = *std::max_element(counts.begin(), counts.end());
  st.min_samples_per_class = *std::min_element(counts.begin(), counts.end());
  return st;
}

Json to_json(const CorpusStats& st) {
  Json per_class = Json::array();
  for (const auto& [name, count] : st.per_class) per_class.push_back(Json{{"class", name}, {"samples", count}});
  return Json{{"schema_version", 1},
              {"n_samples", st.n_samples},
              {"n_classes", st.n_classes},
              {"avg_post_length_words", st.avg_post_length},
              {"avg_symptoms_per_sample", st.avg_symptoms_per_sample},
              {"avg_samples_per_class", st.avg_samples_per_class},
              {"max_samples_per_class", st.max_samples_per_class},
              {"min_samples_per_class", st.min_samples_per_class},
              {"per_class", per_class}};
}

std::string format_stats_table(const CorpusStats& st) {
  std::ostringstream out;
  out << std::fixed;
  auto row = [&](const std::string& label, const std::string& value) {
    out << std::left << std::setw(40) << label << std::right << std::setw(12) << value << '\n';
  };
  auto fixed1 = [](double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(1) << v;
    return s.str();
  };
  row("Statistic", "Value");
  out << std::string(52, '-') << '\n';
  row("# Samples", std::to_string(st.n_samples));
  row("# Symptom Classes", std::to_string(st.n_classes));
  row("Avg. Post Length (words)", fixed1(st.avg_post_length));
  row("Avg. Symptoms per Sample", fixed1(st.avg_symptoms_per_sample));
  row("Avg. Samples per Class", fixed1(st.avg_samples_per_class));
  row("Max. Samples per Class", std::to_string(st.max_samples_per_class));
  row("Min. Samples per Class", std::to_string(st.min_samples_per_class));
  out << std::string(52, '-') << '\n';
  for (const auto& [name, count] : st.per_class) row(name, std::to_string(count));
  return out.str();
}

// ---- splits -------------------------------------------------------------------

namespace {

std::vector<std::string> shuffled_ids(const Corpus& corpus, std::uint64_t seed, std::string_view label) {
  std::vector<std::string> ids;
  ids.reserve(corpus.size());
  for (const auto& s : corpus.samples) ids.push_back(s.id);
  std::sort(ids.begin(), ids.end());
  Rng rng(derive_seed(seed, label));
  rng.shuffle(ids);
  return ids;
}

std::pair<Corpus, Corpus> partition(const Corpus& corpus, const std::unordered_set<std::string>& second_ids) {
  std::pair<Corpus, Corpus> out{Corpus(corpus.scheme), Corpus(corpus.scheme)};
  out.first.metadata = corpus.metadata;
  out.second.metadata = corpus.metadata;
  for (const auto& s : corpus.samples) {
    (second_ids.count(s.id) ? out.second : out.first).samples.push_back(s);
  }
  return out;
}

}  // namespace

SplitPlan kfold_split(const Corpus& corpus, int k, std::uint64_t seed) {
  if (k < 2) throw Error(Errc::kInvalidArgument, "k-fold needs k >= 2");
  if (corpus.size() < static_cast<std::size_t>(k)) {
    throw Error(Errc::kTooFewSamples,
                std::to_string(corpus.size()) + " samples cannot fill " + std::to_string(k) + " folds");
  }
  SplitPlan plan;
  plan.seed = seed;
  plan.folds.resize(static_cast<std::size_t>(k));
  auto ids = shuffled_ids(corpus, seed, "kfold");
  for (std::size_t i = 0; i < ids.size(); ++i) plan.folds[i % plan.folds.size()].push_back(std::move(ids[i]));
  return plan;
}

std::pair<Corpus, Corpus> fold_partition(const Corpus& corpus, const SplitPlan& plan, std::size_t fold) {
  if (fold >= plan.folds.size()) throw Error(Errc::kInvalidArgument, "fold index out of range");
  const std::unordered_set<std::string> test(plan.folds[fold].begin(), plan.folds[fold].end());
  return partition(corpus, test);
}

std::pair<Corpus, Corpus> train_val_split(const Corpus& corpus, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw Error(Errc::kInvalidArgument, "split ratio must lie in (0, 1)");
  auto ids = shuffled_ids(corpus, seed, "train-val");
  const auto n_train = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(ids.size()) + 1e-9));
  const std::unordered_set<std::string> val(ids.begin() + static_cast<std::ptrdiff_t>(n_train), ids.end());
  return partition(corpus, val);
}

// ---- figurative rewriting -----------------------------------------------------

namespace {

llm::GenRequest rewrite_request(const Sample& sample, const PromptLibrary& prompts) {
  auto req = llm::GenRequest::make(llm::Stage::kRewrite, prompts.render("rewrite.system", {}),
                                   prompts.render("rewrite.user", {{"text", sample.text}}));
  req.fixture_key = "rewrite:" + sample.id;
  req.hints = Json{{"task", "rewrite"}, {"text", sample.text}};
  return req;
}

bool recoverable(Errc code) {
  return code == Errc::kUnparseableReply || code == Errc::kMalformedReply || code == Errc::kProviderExhausted;
}

Sample apply_rewrite(const Sample& sample, const llm::Outcome& o) {
  if (!o.ok()) {
    if (!recoverable(o.error->code())) throw *o.error;
    std::cerr << "synsym: rewrite failed for " << sample.id << ": " << o.error->what() << '\n';
    Sample flagged = sample;
    flagged.meta["rewrite_failed"] = "true";
    return flagged;
  }
  Sample out = make_sample(trim(o.response->text), sample.labels, std::string(kSourceRewritten), sample.scheme);
  out.meta = sample.meta;
  out.meta["original_text"] = sample.text;
  out.meta["parent_id"] = sample.id;
  return out;
}

}  // namespace

Sample rewrite_figurative(const Sample& sample, llm::Gateway& gateway, const PromptLibrary& prompts) {
  return apply_rewrite(sample, gateway.complete_all({rewrite_request(sample, prompts)}).front());
}

std::vector<Sample> rewrite_all(const std::vector<Sample>& samples, llm::Gateway& gateway, const PromptLibrary& prompts) {
  std::vector<llm::GenRequest> reqs;
  reqs.reserve(samples.size());
  for (const auto& s : samples) reqs.push_back(rewrite_request(s, prompts));
  auto outcomes = gateway.complete_all(reqs);
  std::vector<Sample> out;
  out.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) out.push_back(apply_rewrite(samples[i], outcomes[i]));
  return out;
}

// ---- back-translation ---------------------------------------------------------

std::string LlmTranslator::translate(std::string_view text, std::string_view from, std::string_view to) {
  auto req = llm::GenRequest::make(
      llm::Stage::kRewrite, prompts_.render("translate.system", {}),
      prompts_.render("translate.user",
                      {{"text", std::string(text)}, {"source_lang", std::string(from)}, {"target_lang", std::string(to)}}));
  req.fixture_key = "translate:" + std::string(from) + "-" + std::string(to) + ":" + to_hex16(fnv1a64(text));
  req.hints = Json{{"task", "translate"}, {"text", std::string(text)}, {"from", std::string(from)}, {"to", std::string(to)}};
  return trim(gateway_.complete(req).text);
}

std::string back_translate(std::string_view text, Translator& translator, std::string_view pivot) {
  try {
    std::string there = translator.translate(text, "en", pivot);
    if (trim(there).empty()) throw Error(Errc::kTranslationFailed, "empty en->" + std::string(pivot) + " translation");
    std::string back = translator.translate(there, pivot, "en");
    if (trim(back).empty()) throw Error(Errc::kTranslationFailed, "empty " + std::string(pivot) + "->en translation");
    return back;
  } catch (const Error& e) {
    if (e.code() == Errc::kTranslationFailed) throw;
    throw Error(Errc::kTranslationFailed, e.what());
  } catch (const std::exception& e) {
    throw Error(Errc::kTranslationFailed, e.what());
  }
}

AugmentResult augment_with_backtranslation(const Corpus& corpus, Translator& translator, std::string_view pivot) {
  AugmentResult result{corpus, 0};
  std::unordered_set<std::string> seen;
  for (const auto& s : corpus.samples) seen.insert(s.id);
  for (const auto& s : corpus.samples) {
    try {
      Sample aug = make_sample(back_translate(s.text, translator, pivot), s.labels, std::string(kSourceAugmented),
                               s.scheme);
      aug.meta["parent_id"] = s.id;
      if (!seen.insert(aug.id).second) throw Error(Errc::kTranslationFailed, "duplicate of an existing sample");
      result.corpus.samples.push_back(std::move(aug));
    } catch (const Error& e) {
      std::cerr << "synsym: back-translation skipped " << s.id << ": " << e.what() << '\n';
      ++result.skipped;
    }
  }
  return result;
}

}  // namespace synsym::data
