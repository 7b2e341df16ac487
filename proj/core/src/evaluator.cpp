#include "bovdyn/evaluator.hpp"

#include "bovdyn/errors.hpp"

#include <array>
#include <cmath>
#include <unordered_map>

namespace bovdyn {

namespace {

bool finite(Complex v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

} // namespace

Complex ipow(Complex base, int exponent)
{
    if (exponent == 0)
        return {1.0, 0.0};
    unsigned n = exponent < 0 ? 0u - static_cast<unsigned>(exponent) : static_cast<unsigned>(exponent);
    Complex result{1.0, 0.0};
    Complex sq = base;
    bool first = true;
    while (n) {
        if (n & 1u) {
            result = first ? sq : result * sq;
            first = false;
        }
        n >>= 1u;
        if (n)
            sq *= sq;
    }
    return exponent < 0 ? Complex(1.0, 0.0) / result : result;
}

Evaluator::Evaluator(const MapExpr& e, double pole_eps) : pole_eps_(pole_eps)
{
    if (!(pole_eps > 0.0))
        throw Error("pole_eps must be positive");
    e.require_bound();

    using namespace expr;
    std::unordered_map<const Node*, int> slot;
    const auto& params = e.params();

    auto emit = [&](auto&& self, const Node& n) -> int {
        if (auto it = slot.find(&n); it != slot.end())
            return it->second;
        Instr ins{};
        std::visit(overloaded{
                       [&](const Const& c) {
                           ins.op = OpCode::Push;
                           ins.value = c.value;
                       },
                       [&](const Var&) { ins.op = OpCode::PushZ; },
                       [&](const Param& p) {
                           ins.op = OpCode::Push;
                           ins.value = params.at(p.name);
                       },
                       [&](const Add& x) {
                           ins.op = OpCode::Add;
                           ins.a = self(self, *x.lhs);
                           ins.b = self(self, *x.rhs);
                       },
                       [&](const Sub& x) {
                           ins.op = OpCode::Sub;
                           ins.a = self(self, *x.lhs);
                           ins.b = self(self, *x.rhs);
                       },
                       [&](const Mul& x) {
                           ins.op = OpCode::Mul;
                           ins.a = self(self, *x.lhs);
                           ins.b = self(self, *x.rhs);
                       },
                       [&](const Div& x) {
                           ins.op = OpCode::Div;
                           ins.a = self(self, *x.lhs);
                           ins.b = self(self, *x.rhs);
                       },
                       [&](const Neg& x) {
                           ins.op = OpCode::Neg;
                           ins.a = self(self, *x.operand);
                       },
                       [&](const IntPow& x) {
                           ins.op = OpCode::Pow;
                           ins.a = self(self, *x.base);
                           ins.exponent = x.exponent;
                       },
                       [&](const Exp& x) {
                           ins.op = OpCode::Exp;
                           ins.a = self(self, *x.arg);
                       },
                   },
                   n.kind);
        code_.push_back(ins);
        const int id = static_cast<int>(code_.size()) - 1;
        slot.emplace(&n, id);
        return id;
    };
    emit(emit, *e.root());
}

EvalOutcome Evaluator::operator()(Complex z) const
{
    if (code_.size() <= kInlineRegisters) {
        std::array<Complex, kInlineRegisters> regs;
        return run(z, regs.data());
    }
    std::vector<Complex> regs(code_.size());
    return run(z, regs.data());
}

EvalOutcome Evaluator::run(Complex z, Complex* regs) const
{
    const std::size_t n = code_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Instr& ins = code_[i];
        Complex v;
        switch (ins.op) {
        case OpCode::Push:
            v = ins.value;
            break;
        case OpCode::PushZ:
            v = z;
            break;
        case OpCode::Add:
            v = regs[ins.a] + regs[ins.b];
            break;
        case OpCode::Sub:
            v = regs[ins.a] - regs[ins.b];
            break;
        case OpCode::Mul:
            v = regs[ins.a] * regs[ins.b];
            break;
        case OpCode::Div: {
            const double mag = std::abs(regs[ins.b]);
            if (mag < pole_eps_)
                return EvalOutcome::pole(mag);
            v = regs[ins.a] / regs[ins.b];
            break;
        }
        case OpCode::Neg:
            v = -regs[ins.a];
            break;
        case OpCode::Pow:
            if (ins.exponent < 0) {
                const Complex p = ipow(regs[ins.a], -ins.exponent);
                const double mag = std::abs(p);
                if (mag < pole_eps_)
                    return EvalOutcome::pole(mag);
                v = Complex(1.0, 0.0) / p;
            } else {
                v = ipow(regs[ins.a], ins.exponent);
            }
            break;
        case OpCode::Exp:
            v = std::exp(regs[ins.a]);
            break;
        }
        if (!finite(v))
            return EvalOutcome::overflow();
        regs[i] = v;
    }
    const Complex out = regs[n - 1];
    if (std::abs(out) >= kOverflowGuard)
        return EvalOutcome::overflow();
    return EvalOutcome::finite_value(out);
}

EvalOutcome eval(const MapExpr& e, Complex z, double pole_eps)
{
    return Evaluator(e, pole_eps)(z);
}

} // namespace bovdyn
