#pragma once

#include <optional>
#include <string>

#include "bpsv/report.hpp"

namespace bpsv {

// Exit codes of the batch surface.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;  // config or I/O problems, raised as Error
inline constexpr int kExitThreshold = 2;
inline constexpr int kExitNotConverged = 3;

// Runs check | solve | sweep | compare. With an output directory the report
// (and any requested dumps and plot data) are written beneath it; without one
// nothing touches the filesystem.
RunReport run_command(const std::string& command, const RunConfig& cfg,
                      const std::optional<std::string>& out_dir = std::nullopt);

}  // namespace bpsv
