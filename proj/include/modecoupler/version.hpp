#pragma once

namespace modecoupler {
inline constexpr const char* tool_name = "modecoupler";
inline constexpr const char* tool_version = "0.1.0";
} // namespace modecoupler
