#pragma once

namespace ugsim {

// Load-cell readings are in gram-force, model forces in newtons.
inline constexpr double kNewtonPerGramForce = 9.80665e-3;

inline constexpr double gf_to_newton(double gf) { return gf * kNewtonPerGramForce; }
inline constexpr double newton_to_gf(double n) { return n / kNewtonPerGramForce; }

} // namespace ugsim
