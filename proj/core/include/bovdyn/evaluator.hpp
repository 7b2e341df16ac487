#pragma once

#include "bovdyn/expr.hpp"

#include <vector>

namespace bovdyn {

inline constexpr double kDefaultPoleEps = 1e-12;
inline constexpr double kOverflowGuard = 1e150;

/// Result of evaluating a map at a point.
struct EvalOutcome {
    enum class Kind { Finite, PoleHit, Overflow };

    Kind kind = Kind::Finite;
    Complex value{};
    /// For PoleHit: magnitude of the divisor that fell below the threshold.
    double divisor_magnitude = 0.0;

    bool finite() const noexcept { return kind == Kind::Finite; }

    static EvalOutcome finite_value(Complex v) { return {Kind::Finite, v, 0.0}; }
    static EvalOutcome pole(double magnitude) { return {Kind::PoleHit, {}, magnitude}; }
    static EvalOutcome overflow() { return {Kind::Overflow, {}, 0.0}; }
};

/// A MapExpr flattened to straight-line code with parameters substituted.
///
/// Shared subtrees are emitted once. Construction validates bindings;
/// evaluation is const and allocation-free for programs of at most
/// kInlineRegisters instructions, so one Evaluator may be shared across threads.
class Evaluator {
public:
    explicit Evaluator(const MapExpr& e, double pole_eps = kDefaultPoleEps);

    EvalOutcome operator()(Complex z) const;

    double pole_eps() const noexcept { return pole_eps_; }
    std::size_t code_size() const noexcept { return code_.size(); }

private:
    enum class OpCode : unsigned char { Push, PushZ, Add, Sub, Mul, Div, Neg, Pow, Exp };
    struct Instr {
        OpCode op;
        int a = -1;
        int b = -1;
        int exponent = 0;
        Complex value{};
    };
    static constexpr std::size_t kInlineRegisters = 64;

    EvalOutcome run(Complex z, Complex* regs) const;

    std::vector<Instr> code_;
    double pole_eps_;
};

/// One-shot evaluation; see Evaluator for repeated use.
EvalOutcome eval(const MapExpr& e, Complex z, double pole_eps = kDefaultPoleEps);

/// Integer power by repeated squaring; negative exponents invert.
Complex ipow(Complex base, int exponent);

} // namespace bovdyn
