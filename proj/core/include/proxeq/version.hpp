#pragma once

namespace proxeq {

inline constexpr const char* kToolVersion = "proxeq 0.1.0";

}  // namespace proxeq
