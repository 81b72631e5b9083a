#pragma once

namespace semijulia {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace semijulia
