#include "synsym/json_io.hpp"

#include <fstream>
#include <sstream>

#include "synsym/errors.hpp"

namespace synsym {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(Errc::kIo, "read failed for " + path.string());
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::kIo, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(Errc::kIo, "write failed for " + path.string());
}

namespace {

[[noreturn]] void schema_error(const std::string& what) {
  throw Error(Errc::kSchemaViolation, what);
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) schema_error("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) schema_error(std::string("missing field '") + key + "'");
  return *it;
}

std::string string_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) schema_error(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

LabelSet label_set(const Json& v, const char* key) {
  if (!v.is_array()) schema_error(std::string("field '") + key + "' must be an array");
  LabelSet out;
  for (const auto& item : v) {
    if (!item.is_string()) schema_error(std::string("field '") + key + "' must hold strings");
    out.insert(trim(item.get<std::string>()));
  }
  return out;
}

Json labels_json(const LabelSet& labels) {
  Json arr = Json::array();
  for (const auto& l : labels) arr.push_back(l);
  return arr;
}

}  // namespace

Json to_json(const LabelScheme& scheme) {
  return Json{{"name", scheme.name()}, {"classes", scheme.classes()}};
}

LabelScheme scheme_from_json(const Json& j) {
  const Json& classes = field(j, "classes");
  if (!classes.is_array()) schema_error("scheme 'classes' must be an array");
  std::vector<std::string> names;
  for (const auto& c : classes) {
    if (!c.is_string()) schema_error("scheme classes must be strings");
    names.push_back(c.get<std::string>());
  }
  try {
    return LabelScheme(string_field(j, "name"), std::move(names));
  } catch (const Error& e) {
    schema_error(e.what());
  }
}

LabelScheme load_scheme(const std::string& ref) {
  constexpr std::string_view kPrefix = "builtin:";
  if (ref.rfind(kPrefix, 0) == 0) return LabelScheme::builtin(ref.substr(kPrefix.size()));
  if (!std::filesystem::exists(ref)) return LabelScheme::builtin(ref);
  try {
    return scheme_from_json(Json::parse(read_file(ref)));
  } catch (const Json::exception& e) {
    schema_error(ref + ": " + e.what());
  }
}

Json to_json(const Sample& sample) {
  Json j{{"id", sample.id},
         {"text", sample.text},
         {"labels", labels_json(sample.labels)},
         {"source", sample.source},
         {"scheme", sample.scheme}};
  if (!sample.meta.empty()) j["meta"] = sample.meta;
  return j;
}

Sample sample_from_json(const Json& j) {
  Sample s;
  s.id = string_field(j, "id");
  s.text = string_field(j, "text");
  s.labels = label_set(field(j, "labels"), "labels");
  s.source = string_field(j, "source");
  s.scheme = string_field(j, "scheme");
  if (auto it = j.find("meta"); it != j.end()) {
    if (!it->is_object()) schema_error("field 'meta' must be an object");
    for (const auto& [k, v] : it->items()) {
      if (!v.is_string()) schema_error("meta values must be strings");
      s.meta[k] = v.get<std::string>();
    }
  }
  return s;
}

Json to_json(const SubConcept& sub) {
  return Json{{"id", sub.id()}, {"text", sub.text}, {"parent", sub.parent}};
}

SubConcept sub_concept_from_json(const Json& j) {
  return SubConcept{trim(string_field(j, "text")), trim(string_field(j, "parent"))};
}

Json to_json(const SymptomSpec& spec) {
  Json subs = Json::array();
  for (const auto& s : spec.sub_concepts) subs.push_back(s.text);
  return Json{{"keyword", spec.keyword}, {"description", spec.description}, {"sub_concepts", subs}};
}

SymptomSpec symptom_spec_from_json(const Json& j) {
  SymptomSpec spec;
  spec.keyword = trim(string_field(j, "keyword"));
  spec.description = trim(string_field(j, "description"));
  if (auto it = j.find("sub_concepts"); it != j.end()) {
    if (!it->is_array()) schema_error("'sub_concepts' must be an array");
    for (const auto& s : *it) {
      if (s.is_string()) {
        spec.sub_concepts.push_back({trim(s.get<std::string>()), spec.keyword});
      } else if (s.is_object() && !s.contains("parent")) {
        spec.sub_concepts.push_back({trim(string_field(s, "text")), spec.keyword});
      } else {
        spec.sub_concepts.push_back(sub_concept_from_json(s));
      }
    }
  }
  return spec;
}

std::vector<SymptomSpec> load_symptom_specs(const std::filesystem::path& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::exception& e) {
    schema_error(path.string() + ": " + e.what());
  }
  if (!j.is_array()) schema_error(path.string() + ": expected an array of symptom specs");
  std::vector<SymptomSpec> out;
  for (const auto& item : j) out.push_back(symptom_spec_from_json(item));
  return out;
}

Json to_json(const Combination& comb) {
  Json members = Json::array();
  for (const auto& m : comb.members()) {
    members.push_back(Json{{"symptom", m.symptom}, {"severity", std::string(to_string(m.severity))}});
  }
  return Json{{"id", comb.id()}, {"members", members}};
}

Combination combination_from_json(const Json& j) {
  const Json& members = field(j, "members");
  if (!members.is_array()) schema_error("'members' must be an array");
  std::vector<CombinationMember> out;
  for (const auto& m : members) {
    auto severity = parse_severity(string_field(m, "severity"));
    if (!severity) schema_error("bad severity in combination");
    out.push_back({string_field(m, "symptom"), *severity});
  }
  try {
    return Combination::make(std::move(out));
  } catch (const Error& e) {
    schema_error(e.what());
  }
}

Json to_json(const Expression& expr) {
  Json prov{{"sub_concept_ids", expr.provenance.sub_concept_ids},
            {"batch_index", expr.provenance.batch_index},
            {"provider_id", expr.provenance.provider_id}};
  if (expr.provenance.combination_id) prov["combination_id"] = *expr.provenance.combination_id;
  Json j{{"id", expr.id},
         {"text", expr.text},
         {"style", std::string(to_string(expr.style))},
         {"labels", labels_json(expr.labels)},
         {"provenance", prov}};
  if (expr.quality_score) j["quality_score"] = *expr.quality_score;
  return j;
}

Expression expression_from_json(const Json& j) {
  Expression e;
  e.id = string_field(j, "id");
  e.text = string_field(j, "text");
  auto style = parse_style(string_field(j, "style"));
  if (!style) schema_error("bad style in expression");
  e.style = *style;
  e.labels = label_set(field(j, "labels"), "labels");
  if (auto it = j.find("provenance"); it != j.end() && it->is_object()) {
    const Json& p = *it;
    if (auto s = p.find("sub_concept_ids"); s != p.end()) {
      e.provenance.sub_concept_ids = s->get<std::vector<std::string>>();
    }
    if (auto c = p.find("combination_id"); c != p.end()) e.provenance.combination_id = c->get<std::string>();
    e.provenance.batch_index = p.value("batch_index", 0);
    e.provenance.provider_id = p.value("provider_id", std::string());
  }
  if (auto q = j.find("quality_score"); q != j.end() && !q->is_null()) {
    if (!q->is_number_integer()) schema_error("quality_score must be an integer");
    int score = q->get<int>();
    if (score < 1 || score > 5) schema_error("quality_score outside 1..5");
    e.quality_score = score;
  }
  return e;
}

std::string to_jsonl(const std::vector<Json>& rows) {
  std::string out;
  for (const auto& r : rows) {
    out += r.dump();
    out += '\n';
  }
  return out;
}

std::vector<Json> parse_jsonl(const std::string& content) {
  std::vector<Json> rows;
  std::istringstream in(content);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      rows.push_back(Json::parse(line));
    } catch (const Json::exception& e) {
      schema_error("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rows;
}

std::string dump_pretty(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace synsym
