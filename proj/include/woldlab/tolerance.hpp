#pragma once

namespace woldlab {

/// Global orthogonality / norm tolerance. Defaults to 1e-9; the environment
/// variable WOLDLAB_TOLERANCE overrides it (read once, on first use).
double tolerance();

/// Residual norm below which Gram-Schmidt drops a vector as dependent.
inline constexpr double kRankTolerance = 1e-7;

inline constexpr int kDefaultDepth = 64;

}  // namespace woldlab
