#pragma once

namespace hitwalk {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace hitwalk
