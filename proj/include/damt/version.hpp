#pragma once

namespace damt {

inline constexpr const char* kToolVersion = "damt 0.1.0";

}  // namespace damt
