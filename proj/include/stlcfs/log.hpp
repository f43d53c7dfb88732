#pragma once

#include <string>

namespace stlcfs {

enum class LogLevel { error = 0, info = 1, debug = 2 };

/// Level from STL_CFS_LOG (error, info, debug); defaults to error. Read once.
LogLevel log_level();
void set_log_level(LogLevel level);

/// Writes "[stlcfs level] message" to stderr when `level` is enabled.
void log(LogLevel level, const std::string& message);

}  // namespace stlcfs
