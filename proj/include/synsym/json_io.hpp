#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "synsym/core.hpp"

namespace synsym {

using Json = nlohmann::json;

std::string read_file(const std::filesystem::path& path);
/// Creates parent directories as needed.
void write_file(const std::filesystem::path& path, const std::string& content);

Json to_json(const LabelScheme& scheme);
LabelScheme scheme_from_json(const Json& j);
/// Accepts "builtin:DSM5-14", a bare builtin name, or a JSON file path.
LabelScheme load_scheme(const std::string& ref);

Json to_json(const Sample& sample);
/// Throws SchemaViolation on missing or mistyped fields.
Sample sample_from_json(const Json& j);

Json to_json(const SubConcept& sub);
SubConcept sub_concept_from_json(const Json& j);

Json to_json(const SymptomSpec& spec);
SymptomSpec symptom_spec_from_json(const Json& j);
/// A JSON array of {keyword, description, sub_concepts?}.
std::vector<SymptomSpec> load_symptom_specs(const std::filesystem::path& path);

Json to_json(const Combination& comb);
Combination combination_from_json(const Json& j);

Json to_json(const Expression& expr);
Expression expression_from_json(const Json& j);

/// One compact JSON document per line, each line terminated by '\n'.
std::string to_jsonl(const std::vector<Json>& rows);
/// Parses every non-blank line; throws SchemaViolation naming the line number.
std::vector<Json> parse_jsonl(const std::string& content);

/// Pretty-printed with two-space indent and a trailing newline.
std::string dump_pretty(const Json& j);

}  // namespace synsym
