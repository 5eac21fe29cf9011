#pragma once

#include <string>

namespace seditor::log {

enum class Level { kError = 0, kInfo = 1, kDebug = 2 };

// Current verbosity. Initialized once from the SEDITOR_LOG environment
// variable (error|info|debug, default info); unknown values fall back to info.
Level level();
void set_level(Level lvl);

void write(Level lvl, const std::string& msg);

// printf-style helpers, cheap no-ops when filtered out
void error(const char* fmt, ...);
void info(const char* fmt, ...);
void debug(const char* fmt, ...);

}  // namespace seditor::log
