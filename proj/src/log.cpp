#include "stlcfs/log.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <mutex>

namespace stlcfs {

namespace {

LogLevel from_env() {
  const char* v = std::getenv("STL_CFS_LOG");
  if (v == nullptr) return LogLevel::error;
  if (std::strcmp(v, "debug") == 0) return LogLevel::debug;
  if (std::strcmp(v, "info") == 0) return LogLevel::info;
  return LogLevel::error;
}

std::atomic<int>& level_storage() {
  static std::atomic<int> level{static_cast<int>(from_env())};
  return level;
}

}  // namespace

LogLevel log_level() { return static_cast<LogLevel>(level_storage().load()); }

void set_log_level(LogLevel level) { level_storage().store(static_cast<int>(level)); }

void log(LogLevel level, const std::string& message) {
  if (static_cast<int>(level) > level_storage().load()) return;
  static std::mutex mu;
  static const char* names[] = {"error", "info", "debug"};
  std::lock_guard<std::mutex> lock(mu);
  std::cerr << "[stlcfs " << names[static_cast<int>(level)] << "] " << message << "\n";
}

}  // namespace stlcfs
