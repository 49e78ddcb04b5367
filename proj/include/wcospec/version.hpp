#pragma once

namespace wcospec {
inline constexpr const char* kVersion = "0.1.0";
}
