#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace leeway::logging {

enum class Level { quiet = 0, warn = 1, info = 2, debug = 3 };

/// Diagnostics level, read once from LEEWAY_LOG_LEVEL (quiet|warn|info|debug).
inline Level level() {
  static Level lv = [] {
    const char* env = std::getenv("LEEWAY_LOG_LEVEL");
    if (!env) return Level::quiet;
    if (std::strcmp(env, "debug") == 0) return Level::debug;
    if (std::strcmp(env, "info") == 0) return Level::info;
    if (std::strcmp(env, "warn") == 0) return Level::warn;
    return Level::quiet;
  }();
  return lv;
}

template <typename... Args>
void log(Level lv, const char* tag, const char* fmt, Args... args) {
  if (static_cast<int>(lv) > static_cast<int>(level())) return;
  std::fprintf(stderr, "[%s] ", tag);
  std::fprintf(stderr, fmt, args...);
  std::fputc('\n', stderr);
}

template <typename... Args>
void warn(const char* fmt, Args... args) {
  log(Level::warn, "warn", fmt, args...);
}
template <typename... Args>
void info(const char* fmt, Args... args) {
  log(Level::info, "info", fmt, args...);
}
template <typename... Args>
void debug(const char* fmt, Args... args) {
  log(Level::debug, "debug", fmt, args...);
}

}  // namespace leeway::logging
