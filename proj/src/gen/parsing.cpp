#include "synsym/parsing.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <set>
#include <sstream>

namespace synsym {
namespace {

std::vector<std::string> lines_of(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Strips a list marker; nullopt when the line has none.
std::optional<std::string> strip_marker(const std::string& raw) {
  std::string line = trim(raw);
  if (line.empty()) return std::nullopt;
  if (line[0] == '-' || line[0] == '*') {
    std::string rest = trim(std::string_view(line).substr(1));
    if (rest.empty()) return std::nullopt;
    return rest;
  }
  std::size_t i = 0;
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
  if (i == 0 || i >= line.size() || (line[i] != '.' && line[i] != ')')) return std::nullopt;
  std::string rest = trim(std::string_view(line).substr(i + 1));
  if (rest.empty()) return std::nullopt;
  return rest;
}

}  // namespace

std::vector<std::string> parse_list_items(std::string_view reply) {
  std::vector<std::string> items;
  for (const auto& line : lines_of(reply)) {
    if (auto item = strip_marker(line)) items.push_back(std::move(*item));
  }
  return items;
}

std::vector<StyledItem> parse_styled_items(std::string_view reply) {
  static const std::regex kTag(R"(^(.*\S)\s*\[\s*(clinical|colloquial)\s*\]\s*$)", std::regex::icase);
  std::vector<StyledItem> out;
  for (const auto& item : parse_list_items(reply)) {
    std::smatch m;
    if (!std::regex_match(item, m, kTag)) continue;
    std::string text = trim(m[1].str());
    // Models sometimes wrap statements in quotes.
    if (text.size() >= 2 && text.front() == '"' && text.back() == '"') text = trim(text.substr(1, text.size() - 2));
    if (text.empty()) continue;
    out.push_back({std::move(text), *parse_style(m[2].str())});
  }
  return out;
}

CombinationParse parse_combinations(std::string_view reply, const std::vector<std::string>& allowed) {
  static const std::regex kMember(R"(^(.*\S)\s*\(\s*([A-Za-z]+)\s*\)$)");
  const std::set<std::string> known(allowed.begin(), allowed.end());
  CombinationParse out;
  for (const auto& item : parse_list_items(reply)) {
    std::vector<CombinationMember> members;
    bool ok = true;
    std::string part;
    std::istringstream parts(item);
    while (ok && std::getline(parts, part, ';')) {
      const std::string piece = trim(part);
      if (piece.empty()) continue;
      std::smatch m;
      if (!std::regex_match(piece, m, kMember)) {
        ok = false;
        break;
      }
      auto severity = parse_severity(m[2].str());
      const std::string name = trim(m[1].str());
      if (!severity || known.count(name) == 0) {
        ok = false;
        break;
      }
      members.push_back({name, *severity});
    }
    if (!ok) {
      ++out.rejected;
      continue;
    }
    try {
      out.accepted.push_back(Combination::make(std::move(members)));
    } catch (const std::exception&) {
      ++out.rejected;
    }
  }
  return out;
}

std::optional<int> parse_score(std::string_view reply) {
  static const std::regex kScore(R"(score\s*[:=]\s*(-?\d+))", std::regex::icase);
  std::optional<int> last;
  bool seen = false;
  for (const auto& line : lines_of(reply)) {
    std::smatch m;
    std::string::const_iterator begin = line.begin();
    // Last match on the line counts.
    std::optional<std::string> value;
    while (std::regex_search(begin, line.end(), m, kScore)) {
      value = m[1].str();
      begin = m[0].second;
    }
    if (!value) continue;
    seen = true;
    try {
      int k = std::stoi(*value);
      last = (k >= 1 && k <= 5) ? std::optional<int>(k) : std::nullopt;
    } catch (const std::exception&) {
      last = std::nullopt;
    }
  }
  return seen ? last : std::nullopt;
}

LabelLineParse parse_label_line(std::string_view reply, const LabelScheme& scheme) {
  static const std::regex kLabels(R"(^\s*\**\s*labels\s*\**\s*:\s*(.*)$)", std::regex::icase);
  LabelLineParse out;
  std::optional<std::string> payload;
  for (const auto& line : lines_of(reply)) {
    std::smatch m;
    if (std::regex_match(line, m, kLabels)) payload = m[1].str();
  }
  if (!payload) return out;
  out.found = true;
  std::string body = trim(*payload);
  while (!body.empty() && (body.back() == '.' || body.back() == '*')) body.pop_back();
  if (lower(trim(body)) == "none" || trim(body).empty()) return out;
  std::istringstream parts(body);
  std::string part;
  while (std::getline(parts, part, ';')) {
    std::string name = trim(part);
    if (name.empty()) continue;
    if (scheme.contains(name)) {
      out.labels.insert(name);
    } else {
      out.unknown.push_back(name);
    }
  }
  return out;
}

}  // namespace synsym
