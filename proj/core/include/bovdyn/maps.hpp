#pragma once

// The maps studied in the worked examples, as parsed expressions.

#include "bovdyn/expr.hpp"

namespace bovdyn::maps {

inline constexpr const char* kFLambda = "lambda/(exp(z)+z)";
inline constexpr const char* kF = "1/(exp(z)+z)";
inline constexpr const char* kF3 = "0.1/(z^9+exp(z))-0.99";
inline constexpr const char* kF4 = "lambda*(1/(z+exp(z))-1)";
/// Term of h' whose positivity on [-0.792, -0.72] is cascaded.
inline constexpr const char* kP = "90*z^8+71.28*z^7+2*exp(z)";
/// x f'(x) + f(x) for f = 1/(exp(z)+z).
inline constexpr const char* kPhi = "exp(z)*(1-z)/(exp(z)+z)^2";
/// Modulus of the multiplier of f3 at a fixed point x.
inline constexpr const char* kH = "10*(z+0.99)^2*(9*z^8+exp(z))";
inline constexpr const char* kQuadraticFamily = "1/(c*z^2+exp(z))";

inline MapExpr f_lambda(Complex lambda) { return parse(kFLambda).with_param("lambda", lambda); }
inline MapExpr f() { return parse(kF); }
inline MapExpr f3() { return parse(kF3); }
inline MapExpr f4(Complex lambda) { return parse(kF4).with_param("lambda", lambda); }
inline MapExpr p() { return parse(kP); }
inline MapExpr phi() { return parse(kPhi); }
inline MapExpr h() { return parse(kH); }
inline MapExpr quadratic_family(Complex c) { return parse(kQuadraticFamily).with_param("c", c); }

} // namespace bovdyn::maps
