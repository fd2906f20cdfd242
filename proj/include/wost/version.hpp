#pragma once

namespace wost {
inline constexpr const char* kVersion = "0.1.0";
}
