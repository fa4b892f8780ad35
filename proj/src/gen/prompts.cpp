#include "synsym/prompts.hpp"

#include "synsym/core.hpp"
#include "synsym/embedded.hpp"
#include "synsym/errors.hpp"
#include "synsym/json_io.hpp"

namespace synsym {

std::string render_template(std::string_view tmpl, const TemplateVars& vars) {
  std::string out;
  out.reserve(tmpl.size());
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    const char c = tmpl[i];
    if (c == '{' && i + 1 < tmpl.size() && tmpl[i + 1] == '{') {
      out += '{';
      ++i;
    } else if (c == '}' && i + 1 < tmpl.size() && tmpl[i + 1] == '}') {
      out += '}';
      ++i;
    } else if (c == '{') {
      const auto close = tmpl.find('}', i);
      if (close == std::string_view::npos) throw Error(Errc::kInvalidArgument, "unclosed '{' in template");
      const std::string name(tmpl.substr(i + 1, close - i - 1));
      auto it = vars.find(name);
      if (it == vars.end()) throw Error(Errc::kInvalidArgument, "template placeholder {" + name + "} has no value");
      out += it->second;
      i = close;
    } else {
      out += c;
    }
  }
  return out;
}

PromptLibrary::PromptLibrary() {
  constexpr std::string_view kPrefix = "prompts/";
  constexpr std::string_view kSuffix = ".txt";
  for (const auto& [path, content] : embedded::all()) {
    if (path.substr(0, kPrefix.size()) != kPrefix) continue;
    std::string_view name = path.substr(kPrefix.size());
    if (name.size() > kSuffix.size() && name.substr(name.size() - kSuffix.size()) == kSuffix) {
      name.remove_suffix(kSuffix.size());
    }
    templates_.emplace(std::string(name), std::string(content));
  }
}

PromptLibrary PromptLibrary::with_overrides(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error(Errc::kIo, "prompt directory not found: " + dir.string());
  PromptLibrary lib;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
    lib.templates_[entry.path().stem().string()] = read_file(entry.path());
  }
  return lib;
}

const std::string& PromptLibrary::get(std::string_view name) const {
  auto it = templates_.find(name);
  if (it == templates_.end()) throw Error(Errc::kInvalidArgument, "no prompt template '" + std::string(name) + "'");
  return it->second;
}

std::string PromptLibrary::render(std::string_view name, const TemplateVars& vars) const {
  return trim(render_template(get(name), vars));
}

}  // namespace synsym
