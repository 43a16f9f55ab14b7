#pragma once

namespace osl {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace osl
