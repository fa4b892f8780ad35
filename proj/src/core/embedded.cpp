#include "synsym/embedded.hpp"

#include "synsym/errors.hpp"

namespace synsym::embedded {

std::string_view get(std::string_view relative_path) {
  const auto& files = all();
  auto it = files.find(relative_path);
  if (it == files.end()) {
    throw Error(Errc::kInvalidArgument, "no embedded data file " + std::string(relative_path));
  }
  return it->second;
}

}  // namespace synsym::embedded
