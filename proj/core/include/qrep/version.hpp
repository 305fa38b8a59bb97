#pragma once

namespace qrep {
inline constexpr const char* kEngineVersion = "0.1.0";
}
