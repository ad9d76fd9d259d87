#pragma once

namespace augsc {
inline constexpr const char* kVersion = "0.1.0";
}
