// log.hpp — leveled stderr diagnostics controlled by NODAL_ATLAS_LOG.
//
// Levels: error < warn < info < debug.  The environment variable
// NODAL_ATLAS_LOG selects the maximum level that is emitted; unset or
// unrecognized values mean "warn".  Output goes to stderr only, so machine
// readable artifacts on stdout stay clean.

#pragma once

#include <cstdarg>

namespace nodal {

enum class LogLevel : int { error = 0, warn = 1, info = 2, debug = 3 };

// Level currently in effect (parsed from the environment on first use).
LogLevel log_level();

// Override the environment-derived level (used by the CLI's --quiet paths
// and by tests); pass-through of the new level.
void set_log_level(LogLevel level);

bool log_enabled(LogLevel level);

// printf-style emission; a newline is appended.
void log_msg(LogLevel level, const char* fmt, ...)
#if defined(__GNUC__)
    __attribute__((format(printf, 2, 3)))
#endif
    ;

#define NODAL_LOG_ERROR(...) ::nodal::log_msg(::nodal::LogLevel::error, __VA_ARGS__)
#define NODAL_LOG_WARN(...) ::nodal::log_msg(::nodal::LogLevel::warn, __VA_ARGS__)
#define NODAL_LOG_INFO(...) ::nodal::log_msg(::nodal::LogLevel::info, __VA_ARGS__)
#define NODAL_LOG_DEBUG(...) ::nodal::log_msg(::nodal::LogLevel::debug, __VA_ARGS__)

}  // namespace nodal
