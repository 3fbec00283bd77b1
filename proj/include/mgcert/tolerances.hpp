#pragma once

// Pinned numeric thresholds. These are part of the observable contract: the
// validation gates and built-in cross-checks fire at exactly these values, so
// changing one changes which inputs are accepted.

namespace mgcert::tol {

inline constexpr double kSym = 1e-10;     // symmetry gate, relative max-norm
inline constexpr double kSpd = 1e-12;     // Cholesky pivot gate, relative to max diagonal
inline constexpr double kSpsd = 1e-10;    // semidefiniteness gate, relative to spectral norm
inline constexpr double kEig = 1e-10;     // eigen reconstruction gate
inline constexpr double kRank = 1e-10;    // smallest vs largest singular value gate
inline constexpr double kCase = 1e-12;    // absolute slack when selecting a bound case
inline constexpr double kRoot = 1e-13;    // bisection residual target

inline constexpr int kJacobiSweepCap = 100;   // cyclic eigensolver sweep limit
inline constexpr double kJacobiOff = 1e-14;   // off-diagonal stop, times Frobenius norm
inline constexpr int kBisectIterCap = 200;    // bisection iteration limit
inline constexpr int kBracketScan = 1000;     // uniform samples when scanning for roots

}  // namespace mgcert::tol
