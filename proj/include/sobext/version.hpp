#pragma once

namespace sobext {

inline constexpr const char* kVersion = "0.1.0";

/// Echoed in every output header.
inline constexpr const char* kProjectionNotice =
    "projection: L2-orthogonal projection onto P_{k-1}; the averaged-kernel projection is not implemented";

}  // namespace sobext
