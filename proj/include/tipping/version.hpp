#pragma once

namespace tipping {
inline constexpr const char* kVersion = "1.0.0";
}
