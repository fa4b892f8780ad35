#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "synsym/core.hpp"
#include "synsym/errors.hpp"
#include "synsym/json_io.hpp"
#include "synsym/llm.hpp"
#include "synsym/prompts.hpp"

namespace synsym::gen {

/// Component switches for ablation runs. All on reproduces the full framework.
struct AblationFlags {
  bool use_ev = true;  // quality scoring and filtering
  bool use_ck = true;  // background co-occurrence knowledge in combination prompts
  bool use_du = true;  // clinical + colloquial style split
  bool use_se = true;  // sub-concept expansion

  bool operator==(const AblationFlags&) const = default;
};

struct StageTemperatures {
  double expansion = 0.0;
  double generation = 0.8;
  double evaluation = 0.0;

  bool operator==(const StageTemperatures&) const = default;
};

struct PipelineConfig {
  LabelScheme scheme = LabelScheme::dsm5_14();
  std::vector<SymptomSpec> symptoms;
  StageTemperatures temperatures;
  int single_batches_per_subconcept = 5;
  int expressions_per_batch = 10;
  int combination_target = 10000;
  int combinations_per_prompt = 10;
  int multi_per_style = 1;
  int min_subconcepts = 10;
  int stall_limit = 20;
  int score_threshold = 2;
  std::string background_knowledge;
  AblationFlags flags;
  std::uint64_t seed = 42;
  PromptLibrary prompts;
};

/// Throws InvalidArgument on any broken invariant.
void validate(const PipelineConfig& cfg);

struct StageCounts {
  std::uint64_t prompts = 0;         // requests issued (re-asks included)
  std::uint64_t failed_prompts = 0;  // replies skipped as unparseable or failed
  std::uint64_t requested = 0;       // items asked for
  std::uint64_t generated = 0;       // items parsed from replies
  std::uint64_t rejected = 0;        // parsed items failing validation or dedup
  std::uint64_t dropped_by_filter = 0;
  double elapsed_ms = 0.0;
};

struct PipelineReport {
  std::map<std::string, StageCounts> stages;
  std::map<std::string, std::uint64_t> label_counts;
  std::map<std::string, std::uint64_t> provider_calls;
  std::uint64_t single_symptom_samples = 0;
  std::uint64_t multi_symptom_samples = 0;
  std::uint64_t duplicate_samples = 0;
  std::uint64_t total_samples = 0;
  std::optional<std::string> failed_stage;
  std::optional<std::string> failure;
};

/// Report as JSON; per-stage wall-clock times only when include_timing.
Json to_json(const PipelineReport& report, bool include_timing = false);

/// Sub-concepts for one symptom. Re-asks once on an empty parse.
/// Throws UnparseableReply, or FanoutTooSmall when fewer than
/// cfg.min_subconcepts unique items remain.
std::vector<SubConcept> expand_concepts(const SymptomSpec& spec, const PipelineConfig& cfg,
                                        llm::Gateway& gateway, StageCounts* counts = nullptr);

/// `single_batches_per_subconcept` prompts for one sub-concept (or, with
/// use_se off, for the symptom description when `sub` is null). Failed
/// batches are skipped and counted.
std::vector<Expression> generate_single(const SymptomSpec& spec, const SubConcept* sub,
                                        const PipelineConfig& cfg, llm::Gateway& gateway,
                                        StageCounts* counts = nullptr);

/// Prompts until cfg.combination_target unique combinations are collected.
/// Throws CombinationStall after cfg.stall_limit consecutive unproductive prompts.
std::vector<Combination> sample_combinations(const PipelineConfig& cfg, llm::Gateway& gateway,
                                             StageCounts* counts = nullptr);

using SubConceptIndex = std::map<std::string, std::vector<SubConcept>>;

/// One prompt per combination; each expression is labeled with all members.
std::vector<Expression> generate_multi(const Combination& comb, const SubConceptIndex& index,
                                       const PipelineConfig& cfg, llm::Gateway& gateway,
                                       StageCounts* counts = nullptr);

/// 1-5 alignment score. A reply without a valid score line is re-asked once
/// and then scored 1.
int score_expression(const Expression& expr, const PipelineConfig& cfg, llm::Gateway& gateway);

/// Scores every expression in place, issuing requests concurrently.
void score_all(std::vector<Expression>& exprs, const PipelineConfig& cfg, llm::Gateway& gateway,
               StageCounts* counts = nullptr);

struct FilterResult {
  std::vector<Expression> retained;
  std::size_t dropped = 0;
};

/// Keeps expressions scoring above `threshold`. With use_ev off everything is
/// kept. Throws Unscored when use_ev is on and a score is missing.
FilterResult filter_by_score(std::vector<Expression> exprs, int threshold = 2, bool use_ev = true);

struct PipelineResult {
  Corpus corpus{LabelScheme::dsm5_14()};
  PipelineReport report;
  std::vector<SubConcept> sub_concepts;
  std::vector<Combination> combinations;
  std::vector<Expression> expressions;  // every generated expression, with scores
  std::optional<Error> failure;         // set when a stage aborted; outputs are partial
};

/// Runs expansion, single generation, combination sampling, multi generation
/// and scoring. Stage failures are captured in the result, not thrown.
PipelineResult run_pipeline(const PipelineConfig& cfg, llm::Gateway& gateway);

}  // namespace synsym::gen
