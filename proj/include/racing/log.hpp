#pragma once

#include <cstdio>

namespace racing {

enum class LogLevel { Off = 0, Error = 1, Warn = 2, Info = 3, Debug = 4 };

// Level comes from RACE_LOG_LEVEL (off|error|warn|info|debug); default warn.
LogLevel log_level();

void log_message(LogLevel level, const char* fmt, ...);

}  // namespace racing

#define RACING_LOG(level, ...)                             \
  do {                                                     \
    if (static_cast<int>(level) <= static_cast<int>(::racing::log_level())) \
      ::racing::log_message(level, __VA_ARGS__);           \
  } while (0)
