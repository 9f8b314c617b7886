#include "racing/log.hpp"

#include <cstdarg>
#include <cstdlib>
#include <cstring>

namespace racing {

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("RACE_LOG_LEVEL");
    if (!env) return LogLevel::Warn;
    if (std::strcmp(env, "off") == 0) return LogLevel::Off;
    if (std::strcmp(env, "error") == 0) return LogLevel::Error;
    if (std::strcmp(env, "warn") == 0) return LogLevel::Warn;
    if (std::strcmp(env, "info") == 0) return LogLevel::Info;
    if (std::strcmp(env, "debug") == 0) return LogLevel::Debug;
    return LogLevel::Warn;
  }();
  return level;
}

void log_message(LogLevel level, const char* fmt, ...) {
  const char* tag = "";
  switch (level) {
    case LogLevel::Error: tag = "error"; break;
    case LogLevel::Warn: tag = "warn"; break;
    case LogLevel::Info: tag = "info"; break;
    case LogLevel::Debug: tag = "debug"; break;
    case LogLevel::Off: return;
  }
  std::fprintf(stderr, "[race:%s] ", tag);
  va_list args;
  va_start(args, fmt);
  std::vfprintf(stderr, fmt, args);
  va_end(args);
  std::fputc('\n', stderr);
}

}  // namespace racing
