#pragma once

namespace crowdtag {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace crowdtag
