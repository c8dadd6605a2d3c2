#pragma once

namespace fluxline {

inline constexpr const char* kVersion = "0.1.0";

} // namespace fluxline
