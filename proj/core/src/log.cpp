#include "proxeq/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace proxeq {

LogLevel log_threshold() {
  static const LogLevel level = [] {
    const char* env = std::getenv("PROXEQ_LOG");
    if (!env) return LogLevel::kError;
    const std::string v(env);
    if (v == "debug") return LogLevel::kDebug;
    if (v == "info") return LogLevel::kInfo;
    return LogLevel::kError;
  }();
  return level;
}

void log_message(LogLevel level, const std::string& msg) {
  static std::mutex mu;
  const char* tag = level == LogLevel::kError  ? "error"
                    : level == LogLevel::kInfo ? "info"
                                               : "debug";
  std::lock_guard<std::mutex> lock(mu);
  std::cerr << "[proxeq:" << tag << "] " << msg << "\n";
}

}  // namespace proxeq
