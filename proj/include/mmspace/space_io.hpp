#pragma once

#include <filesystem>
#include <string>

#include "mmspace/space.hpp"

namespace mms {

// Space file: {"vertices":[{"id","w"[,"tag"]}], "edges":[{"u","v","len"}],
//              "mesh", "tau", "meta"}
std::string to_space_text(const DiscreteSpace& space);
DiscreteSpace from_space_text(const std::string& text);

void save_space(const DiscreteSpace& space, const std::filesystem::path& path);
DiscreteSpace load_space(const std::filesystem::path& path);

}  // namespace mms
