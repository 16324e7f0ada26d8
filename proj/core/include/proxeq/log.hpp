#pragma once

#include <sstream>
#include <string>

namespace proxeq {

enum class LogLevel { kError = 0, kInfo = 1, kDebug = 2 };

// Threshold comes from the PROXEQ_LOG environment variable
// (error | info | debug), read once; default is error.
LogLevel log_threshold();

void log_message(LogLevel level, const std::string& msg);

#define PROXEQ_LOG_AT(level, expr)                        \
  do {                                                    \
    if ((level) <= ::proxeq::log_threshold()) {           \
      std::ostringstream proxeq_log_os_;                  \
      proxeq_log_os_ << expr;                             \
      ::proxeq::log_message((level), proxeq_log_os_.str()); \
    }                                                     \
  } while (0)

#define PROXEQ_ERROR(expr) PROXEQ_LOG_AT(::proxeq::LogLevel::kError, expr)
#define PROXEQ_INFO(expr) PROXEQ_LOG_AT(::proxeq::LogLevel::kInfo, expr)
#define PROXEQ_DEBUG(expr) PROXEQ_LOG_AT(::proxeq::LogLevel::kDebug, expr)

}  // namespace proxeq
