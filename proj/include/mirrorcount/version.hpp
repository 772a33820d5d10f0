#pragma once

namespace mc {

inline constexpr const char* kEngineVersion = "mirrorcount 1.0.0";

} // namespace mc
