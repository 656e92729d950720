#pragma once

namespace wgf {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace wgf
