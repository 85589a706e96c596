#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "cbrn/memory.hpp"

// Line-oriented text format, tag CBRN1. Reals are printed in shortest
// round-trip form so load(save(x)) is bit-exact; output order is canonical.
// Grammar: docs/model_format.md.
namespace cbrn::model_store {

inline constexpr std::string_view kMagic = "CBRN1";

std::string serialize(const MemorySystem& system);
MemorySystem deserialize(std::string_view text);

void save(const MemorySystem& system, const std::filesystem::path& path);
MemorySystem load(const std::filesystem::path& path);

}  // namespace cbrn::model_store
