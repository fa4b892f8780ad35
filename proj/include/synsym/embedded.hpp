#pragma once

#include <map>
#include <string>
#include <string_view>

namespace synsym::embedded {

/// Files shipped under data/, keyed by path relative to that directory.
const std::map<std::string_view, std::string_view>& all();

/// Throws InvalidArgument for unknown paths.
std::string_view get(std::string_view relative_path);

}  // namespace synsym::embedded
