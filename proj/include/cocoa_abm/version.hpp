#pragma once

namespace cocoa_abm {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cocoa_abm
