#pragma once

namespace plr {

inline constexpr const char* kToolName = "plr-chain";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace plr
