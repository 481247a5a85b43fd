#pragma once

namespace riskscore {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace riskscore
