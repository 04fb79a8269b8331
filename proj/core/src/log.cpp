#include "mlgw/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace mlgw {
namespace {

LogLevel parse_level(const char* s) {
  if (!s || !*s) return LogLevel::warn;
  if (std::strcmp(s, "quiet") == 0 || std::strcmp(s, "0") == 0) return LogLevel::quiet;
  if (std::strcmp(s, "warn") == 0 || std::strcmp(s, "1") == 0) return LogLevel::warn;
  if (std::strcmp(s, "info") == 0 || std::strcmp(s, "2") == 0) return LogLevel::info;
  if (std::strcmp(s, "debug") == 0 || std::strcmp(s, "3") == 0) return LogLevel::debug;
  return LogLevel::warn;
}

LogLevel& level_ref() {
  static LogLevel level = parse_level(std::getenv("MLGW_LOG"));
  return level;
}

void emit(const char* tag, const std::string& msg) {
  std::fprintf(stderr, "[mlgw %s] %s\n", tag, msg.c_str());
}

}  // namespace

LogLevel log_level() { return level_ref(); }
void set_log_level(LogLevel level) { level_ref() = level; }

void log_warn(const std::string& msg) {
  if (log_level() >= LogLevel::warn) emit("warn", msg);
}
void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::info) emit("info", msg);
}
void log_debug(const std::string& msg) {
  if (log_level() >= LogLevel::debug) emit("debug", msg);
}

const char* version_string() {
#ifdef MLGW_VERSION_STRING
  return MLGW_VERSION_STRING;
#else
  return "v0.0.0-unknown";
#endif
}

}  // namespace mlgw
