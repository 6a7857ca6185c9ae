#pragma once

namespace cpbnr {

inline constexpr const char* version_string = "cpbnr 1.0.0";

} // namespace cpbnr
