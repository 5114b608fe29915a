#pragma once

namespace covpovm {

inline constexpr const char* kVersionString = "0.1.0";

}  // namespace covpovm
