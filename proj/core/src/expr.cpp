#include "bovdyn/expr.hpp"

#include "bovdyn/errors.hpp"

#include <charconv>
#include <cmath>
#include <unordered_map>

namespace bovdyn {
namespace expr {

namespace {

NodePtr make(auto alt) { return std::make_shared<const Node>(Node{std::move(alt)}); }

std::string format_double(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// An unsigned literal the parser reads back as a single Const node.
bool prints_as_literal(const Complex& c)
{
    const bool real_only = c.imag() == 0.0 && !std::signbit(c.real());
    const bool imag_only = c.real() == 0.0 && !std::signbit(c.real()) && !std::signbit(c.imag());
    return real_only || imag_only;
}

std::string format_constant(const Complex& c)
{
    if (c.imag() == 0.0 && !std::signbit(c.real()))
        return format_double(c.real());
    if (c.real() == 0.0 && !std::signbit(c.real()) && !std::signbit(c.imag()))
        return format_double(c.imag()) + "i";
    // Not producible by the parser; prints as an equal-valued expression.
    std::string re = format_double(std::abs(c.real()));
    std::string im = format_double(std::abs(c.imag()));
    std::string out = "(";
    out += std::signbit(c.real()) ? "-" + re : re;
    out += std::signbit(c.imag()) ? " - " : " + ";
    out += im + "i)";
    return out;
}

bool is_atom(const Node& n)
{
    return std::visit(overloaded{
                          [](const Const& c) { return prints_as_literal(c.value); },
                          [](const Var&) { return true; },
                          [](const Param&) { return true; },
                          [](const Exp&) { return true; },
                          [](const auto&) { return false; },
                      },
                      n.kind);
}

} // namespace

NodePtr constant(Complex value) { return make(Const{value}); }
NodePtr variable() { return make(Var{}); }
NodePtr param(std::string name) { return make(Param{std::move(name)}); }
NodePtr add(NodePtr a, NodePtr b) { return make(Add{std::move(a), std::move(b)}); }
NodePtr sub(NodePtr a, NodePtr b) { return make(Sub{std::move(a), std::move(b)}); }
NodePtr mul(NodePtr a, NodePtr b) { return make(Mul{std::move(a), std::move(b)}); }
NodePtr div(NodePtr a, NodePtr b) { return make(Div{std::move(a), std::move(b)}); }
NodePtr neg(NodePtr a) { return make(Neg{std::move(a)}); }
NodePtr pow(NodePtr base, int exponent) { return make(IntPow{std::move(base), exponent}); }
NodePtr exp(NodePtr arg) { return make(Exp{std::move(arg)}); }

bool structurally_equal(const Node& a, const Node& b)
{
    if (&a == &b)
        return true;
    if (a.kind.index() != b.kind.index())
        return false;
    return std::visit(
        overloaded{
            [&](const Const& x) { return x.value == std::get<Const>(b.kind).value; },
            [&](const Var&) { return true; },
            [&](const Param& x) { return x.name == std::get<Param>(b.kind).name; },
            [&](const Neg& x) { return structurally_equal(*x.operand, *std::get<Neg>(b.kind).operand); },
            [&](const Exp& x) { return structurally_equal(*x.arg, *std::get<Exp>(b.kind).arg); },
            [&](const IntPow& x) {
                const auto& y = std::get<IntPow>(b.kind);
                return x.exponent == y.exponent && structurally_equal(*x.base, *y.base);
            },
            [&]<class Tag>(const Binary<Tag>& x) {
                const auto& y = std::get<Binary<Tag>>(b.kind);
                return structurally_equal(*x.lhs, *y.lhs) && structurally_equal(*x.rhs, *y.rhs);
            },
        },
        a.kind);
}

bool is_constant(const Node& n, Complex value)
{
    const auto* c = std::get_if<Const>(&n.kind);
    return c && c->value == value;
}

std::string to_string(const Node& n)
{
    return std::visit(
        overloaded{
            [](const Const& c) { return format_constant(c.value); },
            [](const Var&) { return std::string("z"); },
            [](const Param& p) { return p.name; },
            [](const Add& x) { return "(" + to_string(*x.lhs) + " + " + to_string(*x.rhs) + ")"; },
            [](const Sub& x) { return "(" + to_string(*x.lhs) + " - " + to_string(*x.rhs) + ")"; },
            [](const Mul& x) { return "(" + to_string(*x.lhs) + " * " + to_string(*x.rhs) + ")"; },
            [](const Div& x) { return "(" + to_string(*x.lhs) + " / " + to_string(*x.rhs) + ")"; },
            [](const Neg& x) { return "(-" + to_string(*x.operand) + ")"; },
            [](const Exp& x) { return "exp(" + to_string(*x.arg) + ")"; },
            [](const IntPow& x) {
                std::string base = to_string(*x.base);
                if (!is_atom(*x.base))
                    base = "(" + base + ")";
                std::string e = std::to_string(x.exponent);
                if (x.exponent < 0)
                    e = "(" + e + ")";
                return base + "^" + e;
            },
        },
        n.kind);
}

void collect_parameters(const Node& n, std::set<std::string>& out)
{
    std::visit(overloaded{
                   [&](const Param& p) { out.insert(p.name); },
                   [&](const Neg& x) { collect_parameters(*x.operand, out); },
                   [&](const Exp& x) { collect_parameters(*x.arg, out); },
                   [&](const IntPow& x) { collect_parameters(*x.base, out); },
                   [&]<class Tag>(const Binary<Tag>& x) {
                       collect_parameters(*x.lhs, out);
                       collect_parameters(*x.rhs, out);
                   },
                   [](const auto&) {},
               },
               n.kind);
}

std::size_t node_count(const Node& n)
{
    return 1 + std::visit(overloaded{
                              [](const Neg& x) { return node_count(*x.operand); },
                              [](const Exp& x) { return node_count(*x.arg); },
                              [](const IntPow& x) { return node_count(*x.base); },
                              [&]<class Tag>(const Binary<Tag>& x) {
                                  return node_count(*x.lhs) + node_count(*x.rhs);
                              },
                              [](const auto&) -> std::size_t { return 0; },
                          },
                          n.kind);
}

} // namespace expr

using namespace expr;

MapExpr::MapExpr() : root_(constant(0.0)) {}

MapExpr::MapExpr(NodePtr root, std::map<std::string, Complex> params)
    : root_(std::move(root)), params_(std::move(params))
{
    if (!root_)
        throw Error("MapExpr requires a root node");
}

MapExpr MapExpr::with_param(const std::string& name, Complex value) const
{
    auto p = params_;
    p[name] = value;
    return MapExpr(root_, std::move(p));
}

MapExpr MapExpr::with_params(const std::map<std::string, Complex>& values) const
{
    auto p = params_;
    for (const auto& [k, v] : values)
        p[k] = v;
    return MapExpr(root_, std::move(p));
}

std::set<std::string> MapExpr::parameter_names() const
{
    std::set<std::string> out;
    collect_parameters(*root_, out);
    return out;
}

void MapExpr::require_bound() const
{
    for (const auto& name : parameter_names())
        if (!params_.contains(name))
            throw UnboundParameter(name);
}

bool operator==(const MapExpr& a, const MapExpr& b)
{
    return a.params_ == b.params_ && structurally_equal(*a.root_, *b.root_);
}

namespace {

// Local folding used while building derivatives. Keeps derivative trees of
// polynomial-like terms linear in size instead of doubling per order.
bool is_zero(const NodePtr& n) { return is_constant(*n, 0.0); }
bool is_one(const NodePtr& n) { return is_constant(*n, 1.0); }
const Const* const_of(const NodePtr& n) { return std::get_if<Const>(&n->kind); }

NodePtr s_neg(NodePtr a)
{
    if (const auto* c = const_of(a))
        return constant(-c->value);
    if (const auto* n = std::get_if<Neg>(&a->kind))
        return n->operand;
    return neg(std::move(a));
}

NodePtr s_add(NodePtr a, NodePtr b)
{
    if (is_zero(a))
        return b;
    if (is_zero(b))
        return a;
    if (const_of(a) && const_of(b))
        return constant(const_of(a)->value + const_of(b)->value);
    return add(std::move(a), std::move(b));
}

NodePtr s_sub(NodePtr a, NodePtr b)
{
    if (is_zero(b))
        return a;
    if (is_zero(a))
        return s_neg(std::move(b));
    if (const_of(a) && const_of(b))
        return constant(const_of(a)->value - const_of(b)->value);
    return sub(std::move(a), std::move(b));
}

NodePtr s_mul(NodePtr a, NodePtr b)
{
    if (is_zero(a) || is_zero(b))
        return constant(0.0);
    if (is_one(a))
        return b;
    if (is_one(b))
        return a;
    if (const_of(a) && const_of(b))
        return constant(const_of(a)->value * const_of(b)->value);
    // Gather constant factors on the left: c1 * (c2 * x) -> (c1 c2) * x.
    if (const_of(a)) {
        if (const auto* m = std::get_if<Mul>(&b->kind); m && const_of(m->lhs))
            return mul(constant(const_of(a)->value * const_of(m->lhs)->value), m->rhs);
    }
    if (const_of(b))
        return s_mul(std::move(b), std::move(a));
    return mul(std::move(a), std::move(b));
}

NodePtr s_div(NodePtr a, NodePtr b)
{
    if (is_zero(a))
        return constant(0.0);
    if (is_one(b))
        return a;
    return div(std::move(a), std::move(b));
}

NodePtr s_pow(NodePtr b, int n)
{
    if (n == 0)
        return constant(1.0);
    if (n == 1)
        return b;
    return pow(std::move(b), n);
}

class Differentiator {
public:
    NodePtr operator()(const NodePtr& n)
    {
        if (auto it = memo_.find(n.get()); it != memo_.end())
            return it->second;
        NodePtr d = derive(n);
        memo_.emplace(n.get(), d);
        return d;
    }

private:
    NodePtr derive(const NodePtr& n)
    {
        return std::visit(
            overloaded{
                [](const Const&) { return constant(0.0); },
                [](const Param&) { return constant(0.0); },
                [](const Var&) { return constant(1.0); },
                [&](const Add& x) { return s_add((*this)(x.lhs), (*this)(x.rhs)); },
                [&](const Sub& x) { return s_sub((*this)(x.lhs), (*this)(x.rhs)); },
                [&](const Mul& x) {
                    return s_add(s_mul((*this)(x.lhs), x.rhs), s_mul(x.lhs, (*this)(x.rhs)));
                },
                [&](const Div& x) {
                    NodePtr da = (*this)(x.lhs);
                    NodePtr db = (*this)(x.rhs);
                    if (is_zero(db))
                        return s_div(da, x.rhs);
                    return s_div(s_sub(s_mul(da, x.rhs), s_mul(x.lhs, db)), s_pow(x.rhs, 2));
                },
                [&](const Neg& x) { return s_neg((*this)(x.operand)); },
                [&](const IntPow& x) {
                    if (x.exponent == 0)
                        return constant(0.0);
                    return s_mul(s_mul(constant(static_cast<double>(x.exponent)),
                                       s_pow(x.base, x.exponent - 1)),
                                 (*this)(x.base));
                },
                [&](const Exp&) { return s_mul(n, (*this)(std::get<Exp>(n->kind).arg)); },
            },
            n->kind);
    }

    std::unordered_map<const Node*, NodePtr> memo_;
};

class Substituter {
public:
    explicit Substituter(NodePtr replacement) : replacement_(std::move(replacement)) {}

    NodePtr operator()(const NodePtr& n)
    {
        if (auto it = memo_.find(n.get()); it != memo_.end())
            return it->second;
        NodePtr out = std::visit(
            overloaded{
                [&](const Var&) { return replacement_; },
                [&](const Const&) { return n; },
                [&](const Param&) { return n; },
                [&](const Neg& x) { return neg((*this)(x.operand)); },
                [&](const Exp& x) { return exp((*this)(x.arg)); },
                [&](const IntPow& x) { return pow((*this)(x.base), x.exponent); },
                [&](const Add& x) { return add((*this)(x.lhs), (*this)(x.rhs)); },
                [&](const Sub& x) { return sub((*this)(x.lhs), (*this)(x.rhs)); },
                [&](const Mul& x) { return mul((*this)(x.lhs), (*this)(x.rhs)); },
                [&](const Div& x) { return div((*this)(x.lhs), (*this)(x.rhs)); },
            },
            n->kind);
        memo_.emplace(n.get(), out);
        return out;
    }

private:
    NodePtr replacement_;
    std::unordered_map<const Node*, NodePtr> memo_;
};

} // namespace

MapExpr differentiate(const MapExpr& e)
{
    Differentiator d;
    return MapExpr(d(e.root()), e.params());
}

MapExpr differentiate(const MapExpr& e, int order)
{
    if (order < 0)
        throw Error("derivative order must be non-negative");
    MapExpr out = e;
    for (int k = 0; k < order; ++k)
        out = differentiate(out);
    return out;
}

MapExpr compose(const MapExpr& outer, const MapExpr& inner)
{
    Substituter s(inner.root());
    auto params = inner.params();
    for (const auto& [k, v] : outer.params())
        params[k] = v;
    return MapExpr(s(outer.root()), std::move(params));
}

MapExpr iterate(const MapExpr& e, int n)
{
    if (n < 1)
        throw Error("iterate count must be at least 1");
    MapExpr out = e;
    for (int k = 1; k < n; ++k)
        out = compose(e, out);
    return out;
}

} // namespace bovdyn
