// Recursive-descent parser for the map expression grammar (docs/grammar.md).

#include "bovdyn/errors.hpp"
#include "bovdyn/expr.hpp"

#include <cctype>
#include <charconv>
#include <limits>

namespace bovdyn {

namespace {

using namespace expr;

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    NodePtr parse_all()
    {
        skip_ws();
        if (at_end())
            fail("empty expression");
        NodePtr n = parse_expr();
        skip_ws();
        if (!at_end())
            fail(std::string("unexpected '") + peek() + "'");
        return n;
    }

private:
    NodePtr parse_expr()
    {
        NodePtr lhs = parse_term();
        for (;;) {
            skip_ws();
            if (accept('+'))
                lhs = add(lhs, parse_term());
            else if (accept('-'))
                lhs = sub(lhs, parse_term());
            else
                return lhs;
        }
    }

    NodePtr parse_term()
    {
        NodePtr lhs = parse_unary();
        for (;;) {
            skip_ws();
            if (accept('*'))
                lhs = mul(lhs, parse_unary());
            else if (accept('/'))
                lhs = div(lhs, parse_unary());
            else
                return lhs;
        }
    }

    NodePtr parse_unary()
    {
        skip_ws();
        if (accept('-'))
            return neg(parse_unary());
        return parse_power();
    }

    NodePtr parse_power()
    {
        NodePtr base = parse_primary();
        skip_ws();
        if (!accept('^'))
            return base;
        return pow(base, parse_exponent());
    }

    int parse_exponent()
    {
        skip_ws();
        const bool paren = accept('(');
        skip_ws();
        bool negative = false;
        if (accept('-'))
            negative = true;
        else
            accept('+');
        skip_ws();
        const std::size_t start = pos_;
        if (at_end() || !digit(peek()))
            fail("exponent must be an integer literal");
        while (!at_end() && digit(peek()))
            ++pos_;
        if (!at_end() && (peek() == '.' || peek() == 'e' || peek() == 'E'))
            fail("non-integer exponent", start);
        long long value = 0;
        auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
        if (ec != std::errc() || value > std::numeric_limits<int>::max())
            fail("exponent out of range", start);
        if (paren) {
            skip_ws();
            expect(')');
        }
        return static_cast<int>(negative ? -value : value);
    }

    NodePtr parse_primary()
    {
        skip_ws();
        if (at_end())
            fail("unexpected end of input");
        const char c = peek();
        if (digit(c) || c == '.')
            return parse_number();
        if (accept('(')) {
            NodePtr inner = parse_expr();
            skip_ws();
            expect(')');
            return inner;
        }
        if (ident_start(c)) {
            const std::size_t start = pos_;
            while (!at_end() && ident_char(peek()))
                ++pos_;
            std::string name(src_.substr(start, pos_ - start));
            skip_ws();
            if (!at_end() && peek() == '(') {
                if (name != "exp")
                    fail("unknown function '" + name + "'", start);
                ++pos_;
                NodePtr arg = parse_expr();
                skip_ws();
                expect(')');
                return exp(arg);
            }
            if (name == "z")
                return variable();
            if (name == "i")
                return constant(Complex(0.0, 1.0));
            if (name == "exp")
                fail("exp requires an argument", start);
            return param(std::move(name));
        }
        fail(std::string("unexpected '") + c + "'");
    }

    NodePtr parse_number()
    {
        const std::size_t start = pos_;
        while (!at_end() && digit(peek()))
            ++pos_;
        if (!at_end() && peek() == '.') {
            ++pos_;
            while (!at_end() && digit(peek()))
                ++pos_;
        }
        if (!at_end() && (peek() == 'e' || peek() == 'E')) {
            std::size_t save = pos_;
            ++pos_;
            if (!at_end() && (peek() == '+' || peek() == '-'))
                ++pos_;
            if (!at_end() && digit(peek())) {
                while (!at_end() && digit(peek()))
                    ++pos_;
            } else {
                pos_ = save;
            }
        }
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
        if (ec != std::errc() || ptr != src_.data() + pos_)
            fail("malformed number", start);
        if (!at_end() && peek() == 'i' && (pos_ + 1 >= src_.size() || !ident_char(src_[pos_ + 1]))) {
            ++pos_;
            return constant(Complex(0.0, value));
        }
        if (!at_end() && ident_char(peek()))
            fail("malformed number", start);
        return constant(Complex(value, 0.0));
    }

    void skip_ws()
    {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek())))
            ++pos_;
    }
    bool at_end() const { return pos_ >= src_.size(); }
    char peek() const { return src_[pos_]; }
    bool accept(char c)
    {
        if (!at_end() && peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c)
    {
        if (!accept(c))
            fail(std::string("expected '") + c + "'");
    }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }
    [[noreturn]] void fail(const std::string& msg, std::size_t at) const { throw ParseError(msg, at); }

    std::string_view src_;
    std::size_t pos_ = 0;
};

} // namespace

MapExpr parse(std::string_view source)
{
    Parser p(source);
    return MapExpr(p.parse_all());
}

} // namespace bovdyn
