#pragma once

namespace batchcg {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace batchcg
