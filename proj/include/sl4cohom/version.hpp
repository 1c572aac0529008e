#pragma once

namespace sl4cohom {

// bumped whenever cached artifact layouts or enumeration order change
inline constexpr const char* kCodeVersion = "sl4cohom-1";

} // namespace sl4cohom
