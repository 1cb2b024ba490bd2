#pragma once

namespace surfframe {

inline constexpr const char* kVersion = "surfframe 0.1.0";

}  // namespace surfframe
