#pragma once

#include <string>

namespace mlgw {

enum class LogLevel { quiet = 0, warn = 1, info = 2, debug = 3 };

// Level comes from the MLGW_LOG environment variable on first use
// (quiet|warn|info|debug or 0..3, default warn); set_log_level overrides.
LogLevel log_level();
void set_log_level(LogLevel level);

void log_warn(const std::string& msg);
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

// Version string embedded at build time (git-describe style when available).
const char* version_string();

}  // namespace mlgw
