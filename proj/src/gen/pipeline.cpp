#include "synsym/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <iostream>
#include <set>
#include <unordered_set>

#include "synsym/parsing.hpp"

namespace synsym::gen {
namespace {

using Clock = std::chrono::steady_clock;
using llm::GenRequest;
using llm::Stage;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

GenRequest make_request(Stage stage, double temperature, const PipelineConfig& cfg,
                        std::string_view system_name, std::string_view user_name, const TemplateVars& vars,
                        std::string key, Json hints) {
  GenRequest req = GenRequest::make(stage, cfg.prompts.render(system_name, {}), cfg.prompts.render(user_name, vars));
  req.temperature = temperature;
  req.fixture_key = std::move(key);
  req.hints = std::move(hints);
  return req;
}

struct StyleSplit {
  int clinical = 0;
  int colloquial = 0;

  int total() const { return clinical + colloquial; }
};

std::string style_instructions(const PipelineConfig& cfg, const StyleSplit& split) {
  if (cfg.flags.use_du) {
    return cfg.prompts.render("style.dual", {{"n_clinical", std::to_string(split.clinical)},
                                             {"n_colloquial", std::to_string(split.colloquial)}});
  }
  return cfg.prompts.render("style.colloquial", {{"count", std::to_string(split.total())}});
}

StyleSplit single_split(const PipelineConfig& cfg) {
  if (cfg.flags.use_du) return {cfg.expressions_per_batch / 2, cfg.expressions_per_batch / 2};
  return {0, cfg.expressions_per_batch};
}

StyleSplit multi_split(const PipelineConfig& cfg) {
  if (cfg.flags.use_du) return {cfg.multi_per_style, cfg.multi_per_style};
  return {0, 2 * cfg.multi_per_style};
}

Expression make_expression(std::string text, Style style, LabelSet labels, Provenance prov) {
  Expression e;
  e.id = expression_id(text, labels, style);
  e.text = std::move(text);
  e.style = style;
  e.labels = std::move(labels);
  e.provenance = std::move(prov);
  return e;
}

void log_skip(std::string_view what, const std::string& why) {
  std::cerr << "synsym: skipped " << what << ": " << why << '\n';
}

// ---- single-symptom generation -------------------------------------------

std::vector<GenRequest> single_requests(const SymptomSpec& spec, const SubConcept* sub, const PipelineConfig& cfg) {
  const StyleSplit split = single_split(cfg);
  const std::string concept_block =
      sub != nullptr ? cfg.prompts.render("concept.subconcept", {{"sub_concept", sub->text}})
                     : cfg.prompts.render("concept.description", {{"description", spec.description}});
  const TemplateVars vars{{"keyword", spec.keyword},
                          {"concept_block", concept_block},
                          {"count", std::to_string(split.total())},
                          {"style_instructions", style_instructions(cfg, split)}};
  Json hints{{"task", "single"},
             {"keyword", spec.keyword},
             {"n_clinical", split.clinical},
             {"n_colloquial", split.colloquial}};
  if (sub != nullptr) {
    hints["sub_concept"] = sub->text;
  } else {
    hints["description"] = spec.description;
  }
  const std::string unit = sub != nullptr ? sub->id() : std::string("description");
  std::vector<GenRequest> reqs;
  for (int b = 0; b < cfg.single_batches_per_subconcept; ++b) {
    reqs.push_back(make_request(Stage::kGeneration, cfg.temperatures.generation, cfg, "single.system", "single.user",
                                vars, "single:" + spec.keyword + ":" + unit + ":" + std::to_string(b), hints));
  }
  return reqs;
}

void collect_single(const std::vector<llm::Outcome>& outcomes, const SymptomSpec& spec, const SubConcept* sub,
                    const PipelineConfig& cfg, std::vector<Expression>& out, StageCounts* counts) {
  const int per_batch = single_split(cfg).total();
  for (std::size_t b = 0; b < outcomes.size(); ++b) {
    if (counts) {
      counts->prompts += 1;
      counts->requested += static_cast<std::uint64_t>(per_batch);
    }
    const auto& o = outcomes[b];
    std::vector<StyledItem> items;
    if (o.ok()) items = parse_styled_items(o.response->text);
    if (items.empty()) {
      if (counts) counts->failed_prompts += 1;
      log_skip("single batch " + std::to_string(b) + " for '" + spec.keyword + "'",
               o.ok() ? "UnparseableReply" : o.error->what());
      continue;
    }
    for (auto& item : items) {
      Provenance prov;
      if (sub != nullptr) prov.sub_concept_ids.push_back(sub->id());
      prov.batch_index = static_cast<int>(b);
      prov.provider_id = o.response->provider_id;
      out.push_back(make_expression(std::move(item.text), item.style, LabelSet{spec.keyword}, std::move(prov)));
      if (counts) counts->generated += 1;
    }
  }
}

// ---- multi-symptom generation --------------------------------------------

const SymptomSpec* find_spec(const PipelineConfig& cfg, const std::string& keyword) {
  for (const auto& s : cfg.symptoms) {
    if (s.keyword == keyword) return &s;
  }
  return nullptr;
}

GenRequest multi_request(const Combination& comb, const SubConceptIndex& index, const PipelineConfig& cfg) {
  std::vector<std::string> combo_lines;
  std::vector<std::string> keywords;
  std::vector<std::string> entries;
  for (const auto& m : comb.members()) {
    combo_lines.push_back("- " + m.symptom + " (" + std::string(to_string(m.severity)) + ")");
    keywords.push_back(m.symptom);
    if (cfg.flags.use_se) {
      auto it = index.find(m.symptom);
      if (it == index.end() || it->second.empty()) {
        throw Error(Errc::kInvalidArgument, "no sub-concepts for combination member '" + m.symptom + "'");
      }
      std::vector<std::string> items;
      for (const auto& sub : it->second) items.push_back("- " + sub.text);
      entries.push_back(cfg.prompts.render("multi.concept", {{"keyword", m.symptom}, {"items", join(items, "\n")}}));
    } else {
      const SymptomSpec* spec = find_spec(cfg, m.symptom);
      if (spec == nullptr) throw Error(Errc::kInvalidArgument, "no description for '" + m.symptom + "'");
      entries.push_back(cfg.prompts.render("multi.description", {{"keyword", m.symptom}, {"description", spec->description}}));
    }
  }
  const std::string block_name = cfg.flags.use_se ? "multi.subconcepts" : "multi.descriptions";
  const StyleSplit split = multi_split(cfg);
  const TemplateVars vars{{"combination", join(combo_lines, "\n")},
                          {"concept_block", cfg.prompts.render(block_name, {{"entries", join(entries, "\n")}})},
                          {"style_instructions", style_instructions(cfg, split)}};
  Json hints{{"task", "multi"}, {"keywords", keywords}, {"n_clinical", split.clinical}, {"n_colloquial", split.colloquial}};
  return make_request(Stage::kGeneration, cfg.temperatures.generation, cfg, "single.system", "multi.user", vars,
                      "multi:" + comb.id(), std::move(hints));
}

void collect_multi(const llm::Outcome& o, const Combination& comb, const SubConceptIndex& index,
                   const PipelineConfig& cfg, std::vector<Expression>& out, StageCounts* counts) {
  if (counts) {
    counts->prompts += 1;
    counts->requested += static_cast<std::uint64_t>(multi_split(cfg).total());
  }
  std::vector<StyledItem> items;
  if (o.ok()) items = parse_styled_items(o.response->text);
  if (items.empty()) {
    if (counts) counts->failed_prompts += 1;
    log_skip("combination " + comb.id(), o.ok() ? "UnparseableReply" : o.error->what());
    return;
  }
  std::vector<std::string> sub_ids;
  if (cfg.flags.use_se) {
    for (const auto& m : comb.members()) {
      if (auto it = index.find(m.symptom); it != index.end()) {
        for (const auto& sub : it->second) sub_ids.push_back(sub.id());
      }
    }
  }
  for (auto& item : items) {
    Provenance prov;
    prov.sub_concept_ids = sub_ids;
    prov.combination_id = comb.id();
    prov.provider_id = o.response->provider_id;
    out.push_back(make_expression(std::move(item.text), item.style, comb.labels(), std::move(prov)));
    if (counts) counts->generated += 1;
  }
}

// ---- scoring ----------------------------------------------------------------

GenRequest score_request(const Expression& expr, const PipelineConfig& cfg) {
  if (expr.labels.empty()) throw Error(Errc::kInvalidArgument, "cannot score an expression without labels");
  std::vector<std::string> labels(expr.labels.begin(), expr.labels.end());
  return make_request(Stage::kEvaluation, cfg.temperatures.evaluation, cfg, "score.system", "score.user",
                      {{"text", expr.text}, {"labels", join(labels, "; ")}}, "score:" + expr.id,
                      Json{{"task", "score"}});
}

std::optional<int> score_of(const llm::Outcome& o) {
  if (!o.ok()) return std::nullopt;
  return parse_score(o.response->text);
}

}  // namespace

void validate(const PipelineConfig& cfg) {
  auto bad = [](const std::string& what) { throw Error(Errc::kInvalidArgument, what); };
  if (cfg.symptoms.empty()) bad("pipeline needs at least one symptom spec");
  if (cfg.single_batches_per_subconcept < 1) bad("single_batches_per_subconcept must be >= 1");
  if (cfg.expressions_per_batch < 1) bad("expressions_per_batch must be >= 1");
  if (cfg.flags.use_du && cfg.expressions_per_batch % 2 != 0) {
    bad("expressions_per_batch must be even when the style split is on");
  }
  if (cfg.combination_target < 0) bad("combination_target must be >= 0");
  if (cfg.combinations_per_prompt < 1) bad("combinations_per_prompt must be >= 1");
  if (cfg.multi_per_style < 1) bad("multi_per_style must be >= 1");
  if (cfg.min_subconcepts < 1) bad("min_subconcepts must be >= 1");
  if (cfg.stall_limit < 1) bad("stall_limit must be >= 1");
  if (cfg.score_threshold < 0 || cfg.score_threshold > 5) bad("score_threshold must lie in 0..5");
  for (double t : {cfg.temperatures.expansion, cfg.temperatures.generation, cfg.temperatures.evaluation}) {
    if (!(t >= 0.0 && t <= 2.0)) bad("stage temperatures must lie in [0, 2]");
  }
  std::set<std::string> seen;
  for (const auto& spec : cfg.symptoms) {
    auto problems = validate_symptom_spec(spec, cfg.scheme);
    if (!problems.empty()) bad(problems.front());
    if (!seen.insert(spec.keyword).second) bad("symptom '" + spec.keyword + "' listed twice");
  }
  if (cfg.combination_target > 0 && cfg.symptoms.size() < kMinCombinationSize) {
    bad("combination sampling needs at least two symptoms");
  }
}

Json to_json(const PipelineReport& report, bool include_timing) {
  Json stages = Json::object();
  for (const auto& [name, c] : report.stages) {
    Json s{{"prompts", c.prompts},
           {"failed_prompts", c.failed_prompts},
           {"requested", c.requested},
           {"generated", c.generated},
           {"rejected", c.rejected},
           {"dropped_by_filter", c.dropped_by_filter}};
    if (include_timing) s["elapsed_ms"] = c.elapsed_ms;
    stages[name] = s;
  }
  Json j{{"schema_version", 1},
         {"stages", stages},
         {"label_counts", report.label_counts},
         {"provider_calls", report.provider_calls},
         {"single_symptom_samples", report.single_symptom_samples},
         {"multi_symptom_samples", report.multi_symptom_samples},
         {"duplicate_samples", report.duplicate_samples},
         {"total_samples", report.total_samples},
         {"status", report.failed_stage ? "failed" : "ok"}};
  if (report.failed_stage) j["failed_stage"] = *report.failed_stage;
  if (report.failure) j["failure"] = *report.failure;
  return j;
}

std::vector<SubConcept> expand_concepts(const SymptomSpec& spec, const PipelineConfig& cfg, llm::Gateway& gateway,
                                        StageCounts* counts) {
  if (spec.keyword.empty() || trim(spec.description).empty()) {
    throw Error(Errc::kInvalidArgument, "expansion needs a keyword and a description");
  }
  GenRequest req = make_request(
      Stage::kExpansion, cfg.temperatures.expansion, cfg, "expansion.system", "expansion.user",
      {{"keyword", spec.keyword}, {"description", spec.description}, {"min_count", std::to_string(cfg.min_subconcepts)}},
      "expand:" + spec.keyword, Json{{"task", "expand"}, {"keyword", spec.keyword}, {"min_count", cfg.min_subconcepts}});
  std::vector<std::string> items;
  for (int attempt = 0; attempt < 2 && items.empty(); ++attempt) {
    if (counts) counts->prompts += 1;
    items = parse_list_items(gateway.complete(req).text);
  }
  if (items.empty()) {
    if (counts) counts->failed_prompts += 1;
    throw Error(Errc::kUnparseableReply, "expansion reply for '" + spec.keyword + "' has no list items");
  }
  std::vector<SubConcept> out;
  std::unordered_set<std::string> seen;
  for (auto& item : items) {
    if (counts) counts->generated += 1;
    if (!seen.insert(lower(item)).second) {
      if (counts) counts->rejected += 1;
      continue;
    }
    out.push_back({std::move(item), spec.keyword});
  }
  if (out.size() < static_cast<std::size_t>(cfg.min_subconcepts)) {
    throw Error(Errc::kFanoutTooSmall, "'" + spec.keyword + "' expanded to " + std::to_string(out.size()) +
                                           " unique sub-concepts, fewer than " + std::to_string(cfg.min_subconcepts));
  }
  return out;
}

std::vector<Expression> generate_single(const SymptomSpec& spec, const SubConcept* sub, const PipelineConfig& cfg,
                                        llm::Gateway& gateway, StageCounts* counts) {
  if (sub != nullptr && sub->parent != spec.keyword) {
    throw Error(Errc::kInvalidArgument, "sub-concept '" + sub->text + "' does not belong to '" + spec.keyword + "'");
  }
  std::vector<Expression> out;
  collect_single(gateway.complete_all(single_requests(spec, sub, cfg)), spec, sub, cfg, out, counts);
  return out;
}

std::vector<Combination> sample_combinations(const PipelineConfig& cfg, llm::Gateway& gateway, StageCounts* counts) {
  if (cfg.combination_target < 0) throw Error(Errc::kInvalidArgument, "combination target must be >= 0");
  std::vector<Combination> out;
  if (cfg.combination_target == 0) return out;

  std::vector<std::string> names;
  for (const auto& s : cfg.symptoms) names.push_back(s.keyword);
  std::vector<std::string> listed;
  for (const auto& n : names) listed.push_back("- " + n);
  const std::string background =
      cfg.flags.use_ck ? "\n" + cfg.prompts.render("background", {{"background_knowledge", trim(cfg.background_knowledge)}}) + "\n"
                       : std::string();
  const TemplateVars vars{{"symptom_list", join(listed, "\n")},
                          {"background_block", background},
                          {"count", std::to_string(cfg.combinations_per_prompt)}};
  const Json hints{{"task", "combine"}, {"classes", names}, {"count", cfg.combinations_per_prompt}};

  const auto target = static_cast<std::size_t>(cfg.combination_target);
  std::unordered_set<std::string> seen;
  int unproductive = 0;
  std::size_t prompt_index = 0;
  while (out.size() < target) {
    std::vector<GenRequest> round;
    for (int i = 0; i < gateway.max_concurrency(); ++i, ++prompt_index) {
      round.push_back(make_request(Stage::kGeneration, cfg.temperatures.generation, cfg, "combine.system",
                                   "combine.user", vars, "combine:" + std::to_string(prompt_index), hints));
    }
    for (const auto& o : gateway.complete_all(round)) {
      if (counts) {
        counts->prompts += 1;
        counts->requested += static_cast<std::uint64_t>(cfg.combinations_per_prompt);
      }
      std::size_t fresh = 0;
      if (!o.ok()) {
        if (counts) counts->failed_prompts += 1;
        log_skip("combination prompt", o.error->what());
      } else {
        CombinationParse parsed = parse_combinations(o.response->text, names);
        if (parsed.accepted.empty() && parsed.rejected == 0 && counts) counts->failed_prompts += 1;
        if (counts) {
          counts->generated += parsed.accepted.size() + parsed.rejected;
          counts->rejected += parsed.rejected;
        }
        for (auto& c : parsed.accepted) {
          if (out.size() >= target) break;
          if (seen.insert(c.id()).second) {
            out.push_back(std::move(c));
            ++fresh;
          } else if (counts) {
            counts->rejected += 1;
          }
        }
      }
      if (out.size() >= target) break;
      unproductive = fresh == 0 ? unproductive + 1 : 0;
      if (unproductive >= cfg.stall_limit) {
        throw Error(Errc::kCombinationStall, "no new combinations in " + std::to_string(unproductive) +
                                                 " consecutive prompts (" + std::to_string(out.size()) + " of " +
                                                 std::to_string(target) + " collected)");
      }
    }
  }
  return out;
}

std::vector<Expression> generate_multi(const Combination& comb, const SubConceptIndex& index, const PipelineConfig& cfg,
                                       llm::Gateway& gateway, StageCounts* counts) {
  GenRequest req = multi_request(comb, index, cfg);
  std::vector<Expression> out;
  collect_multi(gateway.complete_all({req}).front(), comb, index, cfg, out, counts);
  return out;
}

int score_expression(const Expression& expr, const PipelineConfig& cfg, llm::Gateway& gateway) {
  const GenRequest req = score_request(expr, cfg);
  for (int attempt = 0; attempt < 2; ++attempt) {
    llm::Outcome o = gateway.complete_all({req}).front();
    if (auto s = score_of(o)) return *s;
  }
  return 1;
}

void score_all(std::vector<Expression>& exprs, const PipelineConfig& cfg, llm::Gateway& gateway, StageCounts* counts) {
  std::vector<GenRequest> reqs;
  reqs.reserve(exprs.size());
  for (const auto& e : exprs) reqs.push_back(score_request(e, cfg));
  auto first = gateway.complete_all(reqs);
  std::vector<std::size_t> retry;
  for (std::size_t i = 0; i < exprs.size(); ++i) {
    if (counts) counts->prompts += 1;
    if (auto s = score_of(first[i])) {
      exprs[i].quality_score = *s;
    } else {
      retry.push_back(i);
    }
  }
  if (retry.empty()) return;
  std::vector<GenRequest> again;
  for (auto i : retry) again.push_back(reqs[i]);
  auto second = gateway.complete_all(again);
  for (std::size_t r = 0; r < retry.size(); ++r) {
    if (counts) counts->prompts += 1;
    if (auto s = score_of(second[r])) {
      exprs[retry[r]].quality_score = *s;
    } else {
      // Unparseable after one re-ask: lowest score, so the filter discards it.
      exprs[retry[r]].quality_score = 1;
      if (counts) counts->failed_prompts += 1;
    }
  }
}

FilterResult filter_by_score(std::vector<Expression> exprs, int threshold, bool use_ev) {
  FilterResult out;
  if (!use_ev) {
    out.retained = std::move(exprs);
    return out;
  }
  for (const auto& e : exprs) {
    if (!e.quality_score) throw Error(Errc::kUnscored, "expression " + e.id + " has no quality score");
  }
  for (auto& e : exprs) {
    if (*e.quality_score > threshold) {
      out.retained.push_back(std::move(e));
    } else {
      ++out.dropped;
    }
  }
  return out;
}

PipelineResult run_pipeline(const PipelineConfig& cfg, llm::Gateway& gateway) {
  PipelineResult result;
  result.corpus = Corpus(cfg.scheme);
  PipelineReport& report = result.report;

  std::array<std::uint64_t, llm::kStageCount> calls_before{};
  for (std::size_t s = 0; s < llm::kStageCount; ++s) calls_before[s] = gateway.requests(static_cast<Stage>(s));

  std::string current = "validation";
  std::vector<Expression> singles;
  std::vector<Expression> multis;
  std::vector<Expression> retained;
  bool filtered = false;

  auto timed = [&](const std::string& name, auto&& body) {
    current = name;
    StageCounts& counts = report.stages[name];
    const auto start = Clock::now();
    try {
      body(counts);
    } catch (...) {
      counts.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
      throw;
    }
    counts.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  };

  try {
    validate(cfg);

    SubConceptIndex index;
    if (cfg.flags.use_se) {
      timed("expansion", [&](StageCounts& counts) {
        for (const auto& spec : cfg.symptoms) {
          std::vector<SubConcept> subs =
              spec.sub_concepts.empty() ? expand_concepts(spec, cfg, gateway, &counts) : spec.sub_concepts;
          result.sub_concepts.insert(result.sub_concepts.end(), subs.begin(), subs.end());
          index[spec.keyword] = std::move(subs);
        }
      });
    }

    timed("single", [&](StageCounts& counts) {
      struct Unit {
        const SymptomSpec* spec;
        const SubConcept* sub;
        std::size_t first;
        std::size_t count;
      };
      std::vector<Unit> units;
      std::vector<GenRequest> reqs;
      for (const auto& spec : cfg.symptoms) {
        std::vector<const SubConcept*> subs;
        if (cfg.flags.use_se) {
          for (const auto& sub : index.at(spec.keyword)) subs.push_back(&sub);
        } else {
          subs.push_back(nullptr);
        }
        for (const SubConcept* sub : subs) {
          auto batch = single_requests(spec, sub, cfg);
          units.push_back({&spec, sub, reqs.size(), batch.size()});
          for (auto& r : batch) reqs.push_back(std::move(r));
        }
      }
      auto outcomes = gateway.complete_all(reqs);
      for (const auto& u : units) {
        std::vector<llm::Outcome> slice(outcomes.begin() + static_cast<std::ptrdiff_t>(u.first),
                                        outcomes.begin() + static_cast<std::ptrdiff_t>(u.first + u.count));
        collect_single(slice, *u.spec, u.sub, cfg, singles, &counts);
      }
    });

    timed("combination", [&](StageCounts& counts) { result.combinations = sample_combinations(cfg, gateway, &counts); });

    timed("multi", [&](StageCounts& counts) {
      std::vector<GenRequest> reqs;
      for (const auto& comb : result.combinations) reqs.push_back(multi_request(comb, index, cfg));
      auto outcomes = gateway.complete_all(reqs);
      for (std::size_t i = 0; i < outcomes.size(); ++i) {
        collect_multi(outcomes[i], result.combinations[i], index, cfg, multis, &counts);
      }
    });

    std::vector<Expression> all = singles;
    all.insert(all.end(), multis.begin(), multis.end());
    if (cfg.flags.use_ev) {
      timed("evaluation", [&](StageCounts& counts) {
        score_all(all, cfg, gateway, &counts);
        counts.requested = all.size();
        counts.generated = all.size();
        FilterResult f = filter_by_score(all, cfg.score_threshold, true);
        counts.dropped_by_filter = f.dropped;
        retained = std::move(f.retained);
      });
    } else {
      retained = all;
    }
    filtered = true;
    result.expressions = std::move(all);
  } catch (const Error& e) {
    result.failure = e;
    report.failed_stage = current;
    report.failure = std::string(errc_name(e.code())) + ": " + e.what();
  }

  if (!filtered) {
    result.expressions = singles;
    result.expressions.insert(result.expressions.end(), multis.begin(), multis.end());
    retained = result.expressions;
  }

  std::unordered_set<std::string> ids;
  for (const auto& e : retained) {
    Sample s = to_sample(e, cfg.scheme);
    if (!ids.insert(s.id).second) {
      ++report.duplicate_samples;
      continue;
    }
    if (e.provenance.combination_id) {
      ++report.multi_symptom_samples;
    } else {
      ++report.single_symptom_samples;
    }
    result.corpus.samples.push_back(std::move(s));
  }
  report.total_samples = result.corpus.samples.size();
  for (const auto& cls : cfg.scheme.classes()) report.label_counts[cls] = 0;
  for (const auto& s : result.corpus.samples) {
    for (const auto& l : s.labels) ++report.label_counts[l];
  }
  for (std::size_t s = 0; s < llm::kStageCount; ++s) {
    const auto stage = static_cast<Stage>(s);
    report.provider_calls[std::string(llm::to_string(stage))] = gateway.requests(stage) - calls_before[s];
  }
  result.corpus.metadata["generator"] = "synsym";
  result.corpus.metadata["seed"] = std::to_string(cfg.seed);
  return result;
}

}  // namespace synsym::gen
