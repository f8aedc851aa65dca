#pragma once

namespace slsito {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace slsito
