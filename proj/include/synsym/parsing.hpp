#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "synsym/core.hpp"

namespace synsym {

/// Items of a numbered ("1." / "1)") or bulleted ("-" / "*") list. Lines
/// without a marker are ignored.
std::vector<std::string> parse_list_items(std::string_view reply);

struct StyledItem {
  std::string text;
  Style style;
};

/// List items ending in a [clinical] or [colloquial] tag, with the tag removed.
/// Untagged items are dropped.
std::vector<StyledItem> parse_styled_items(std::string_view reply);

struct CombinationParse {
  std::vector<Combination> accepted;
  std::size_t rejected = 0;  // wrong size, unknown or repeated symptom, bad severity
};

/// List items of the form "A (severe); B (mild)". Symptom names must be in
/// `allowed`.
CombinationParse parse_combinations(std::string_view reply, const std::vector<std::string>& allowed);

/// The last "Score: k" line; nullopt when absent or k is outside 1..5.
std::optional<int> parse_score(std::string_view reply);

struct LabelLineParse {
  bool found = false;
  LabelSet labels;
  std::vector<std::string> unknown;
};

/// The last "Labels: a; b" line. "none" yields an empty set; names outside the
/// scheme go to `unknown`.
LabelLineParse parse_label_line(std::string_view reply, const LabelScheme& scheme);

}  // namespace synsym
