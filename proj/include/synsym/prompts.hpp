#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace synsym {

using TemplateVars = std::map<std::string, std::string>;

/// Replaces every {name} with vars[name]. "{{" and "}}" produce literal braces.
/// Throws InvalidArgument for a placeholder missing from vars or an unclosed brace.
std::string render_template(std::string_view tmpl, const TemplateVars& vars);

/// Named prompt templates ("single.user", "score.system", ...). Defaults are the
/// files shipped under data/prompts; a directory may override any subset.
class PromptLibrary {
 public:
  PromptLibrary();

  /// Files named "<template>.txt" in `dir` replace the defaults of the same name.
  static PromptLibrary with_overrides(const std::filesystem::path& dir);

  const std::string& get(std::string_view name) const;
  std::string render(std::string_view name, const TemplateVars& vars) const;
  void set(std::string name, std::string text) { templates_[std::move(name)] = std::move(text); }

  bool operator==(const PromptLibrary&) const = default;

 private:
  std::map<std::string, std::string, std::less<>> templates_;
};

}  // namespace synsym
