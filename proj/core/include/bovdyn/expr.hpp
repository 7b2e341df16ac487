#pragma once

// Expression language for meromorphic maps of one complex variable `z`.
//
// Trees are immutable and shared; a MapExpr pairs a tree with parameter
// bindings. The grammar is documented in docs/grammar.md.

#include <complex>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>

namespace bovdyn {

using Complex = std::complex<double>;

namespace expr {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Const {
    Complex value;
};
struct Var {};
struct Param {
    std::string name;
};

template <class Tag>
struct Binary {
    NodePtr lhs;
    NodePtr rhs;
};
struct AddTag {};
struct SubTag {};
struct MulTag {};
struct DivTag {};
using Add = Binary<AddTag>;
using Sub = Binary<SubTag>;
using Mul = Binary<MulTag>;
using Div = Binary<DivTag>;

struct Neg {
    NodePtr operand;
};
struct IntPow {
    NodePtr base;
    int exponent;
};
struct Exp {
    NodePtr arg;
};

struct Node {
    std::variant<Const, Var, Param, Add, Sub, Mul, Div, Neg, IntPow, Exp> kind;
};

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

// Raw constructors: build exactly the requested node.
NodePtr constant(Complex value);
NodePtr variable();
NodePtr param(std::string name);
NodePtr add(NodePtr a, NodePtr b);
NodePtr sub(NodePtr a, NodePtr b);
NodePtr mul(NodePtr a, NodePtr b);
NodePtr div(NodePtr a, NodePtr b);
NodePtr neg(NodePtr a);
NodePtr pow(NodePtr base, int exponent);
NodePtr exp(NodePtr arg);

bool structurally_equal(const Node& a, const Node& b);
bool is_constant(const Node& n, Complex value);

/// Prints a node in re-parseable form.
std::string to_string(const Node& n);

void collect_parameters(const Node& n, std::set<std::string>& out);
std::size_t node_count(const Node& n);

} // namespace expr

/// A meromorphic map: expression tree plus parameter bindings.
class MapExpr {
public:
    MapExpr();
    explicit MapExpr(expr::NodePtr root, std::map<std::string, Complex> params = {});

    const expr::NodePtr& root() const noexcept { return root_; }
    const std::map<std::string, Complex>& params() const noexcept { return params_; }

    MapExpr with_param(const std::string& name, Complex value) const;
    MapExpr with_params(const std::map<std::string, Complex>& values) const;

    /// Parameter names referenced by the tree.
    std::set<std::string> parameter_names() const;
    /// Throws UnboundParameter for the first referenced name without a binding.
    void require_bound() const;

    std::string to_string() const { return expr::to_string(*root_); }

    friend bool operator==(const MapExpr& a, const MapExpr& b);

private:
    expr::NodePtr root_;
    std::map<std::string, Complex> params_;
};

/// Parses expression text. Throws ParseError carrying the byte offset.
MapExpr parse(std::string_view source);

/// Symbolic derivative with respect to z. Bindings are carried over.
MapExpr differentiate(const MapExpr& e);
/// n-th symbolic derivative (n >= 0).
MapExpr differentiate(const MapExpr& e, int order);

/// outer(inner(z)); bindings are merged, outer wins on conflict.
MapExpr compose(const MapExpr& outer, const MapExpr& inner);
/// e iterated n times (n >= 1).
MapExpr iterate(const MapExpr& e, int n);

} // namespace bovdyn
