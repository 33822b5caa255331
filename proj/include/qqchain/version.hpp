#pragma once

namespace qqchain {

inline constexpr const char* version = "1.0.0";

} // namespace qqchain
