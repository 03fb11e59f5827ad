#pragma once

namespace radrisk {

inline constexpr const char* version = "0.1.0";

}  // namespace radrisk
