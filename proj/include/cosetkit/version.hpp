#pragma once

namespace cosetkit {

inline constexpr const char* kEngineVersion = "cosetkit-0.1.0";

}  // namespace cosetkit
