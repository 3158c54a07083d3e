#pragma once

namespace nrlab {

inline constexpr const char* kName = "nrlab";
inline constexpr const char* kVersion = "0.2.0";

}  // namespace nrlab
