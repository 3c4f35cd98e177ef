#include "nodal/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <mutex>

namespace nodal {

namespace {

LogLevel parse_env_level() {
    const char* env = std::getenv("NODAL_ATLAS_LOG");
    if (env == nullptr) return LogLevel::warn;
    if (std::strcmp(env, "error") == 0) return LogLevel::error;
    if (std::strcmp(env, "warn") == 0) return LogLevel::warn;
    if (std::strcmp(env, "info") == 0) return LogLevel::info;
    if (std::strcmp(env, "debug") == 0) return LogLevel::debug;
    return LogLevel::warn;
}

LogLevel g_level = parse_env_level();
std::mutex g_mutex;

const char* level_tag(LogLevel level) {
    switch (level) {
        case LogLevel::error: return "error";
        case LogLevel::warn: return "warn";
        case LogLevel::info: return "info";
        case LogLevel::debug: return "debug";
    }
    return "?";
}

}  // namespace

LogLevel log_level() { return g_level; }

void set_log_level(LogLevel level) { g_level = level; }

bool log_enabled(LogLevel level) {
    return static_cast<int>(level) <= static_cast<int>(g_level);
}

void log_msg(LogLevel level, const char* fmt, ...) {
    if (!log_enabled(level)) return;
    std::lock_guard<std::mutex> lock(g_mutex);
    std::fprintf(stderr, "[nodal-atlas %s] ", level_tag(level));
    va_list args;
    va_start(args, fmt);
    std::vfprintf(stderr, fmt, args);
    va_end(args);
    std::fputc('\n', stderr);
}

}  // namespace nodal
