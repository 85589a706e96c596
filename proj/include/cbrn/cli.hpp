#pragma once

#include <ostream>

#include "cbrn/error.hpp"

namespace cbrn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

int exit_code_for(ErrorCode code);

// Entry point of the `cbrn` tool; never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cbrn::cli
