#include "seditor/util/log.hpp"

#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace seditor::log {
namespace {

Level parse_env() {
  const char* raw = std::getenv("SEDITOR_LOG");
  if (raw == nullptr) return Level::kInfo;
  if (std::strcmp(raw, "error") == 0) return Level::kError;
  if (std::strcmp(raw, "debug") == 0) return Level::kDebug;
  return Level::kInfo;
}

Level& current() {
  static Level lvl = parse_env();
  return lvl;
}

const char* tag(Level lvl) {
  switch (lvl) {
    case Level::kError: return "error";
    case Level::kDebug: return "debug";
    default: return "info";
  }
}

void vwrite(Level lvl, const char* fmt, std::va_list args) {
  if (static_cast<int>(lvl) > static_cast<int>(current())) return;
  std::fprintf(stderr, "[%s] ", tag(lvl));
  std::vfprintf(stderr, fmt, args);
  std::fputc('\n', stderr);
}

}  // namespace

Level level() { return current(); }
void set_level(Level lvl) { current() = lvl; }

void write(Level lvl, const std::string& msg) {
  if (static_cast<int>(lvl) > static_cast<int>(current())) return;
  std::fprintf(stderr, "[%s] %s\n", tag(lvl), msg.c_str());
}

void error(const char* fmt, ...) {
  std::va_list args;
  va_start(args, fmt);
  vwrite(Level::kError, fmt, args);
  va_end(args);
}

void info(const char* fmt, ...) {
  std::va_list args;
  va_start(args, fmt);
  vwrite(Level::kInfo, fmt, args);
  va_end(args);
}

void debug(const char* fmt, ...) {
  std::va_list args;
  va_start(args, fmt);
  vwrite(Level::kDebug, fmt, args);
  va_end(args);
}

}  // namespace seditor::log
