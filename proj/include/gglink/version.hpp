#pragma once

namespace gglink {

constexpr const char* kVersion = "0.1.0";

}  // namespace gglink
