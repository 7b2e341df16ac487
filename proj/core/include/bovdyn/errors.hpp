#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace bovdyn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset()` is the byte offset of the offending token.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t offset)
        : Error(message + " at offset " + std::to_string(offset)), offset_(offset)
    {
    }
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class UnboundParameter : public Error {
public:
    explicit UnboundParameter(const std::string& name)
        : Error("unbound parameter '" + name + "'"), name_(name)
    {
    }
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// Interval evaluation hit a divisor enclosure containing zero.
class IntervalDivisionByZero : public Error {
public:
    explicit IntervalDivisionByZero(const std::string& subexpression)
        : Error("interval divisor contains zero in '" + subexpression + "'"),
          subexpression_(subexpression)
    {
    }
    const std::string& subexpression() const noexcept { return subexpression_; }

private:
    std::string subexpression_;
};

/// Interval evaluation left the representable range or met a non-real operand.
class IntervalDomainError : public Error {
public:
    using Error::Error;
};

class NewtonDivergence : public Error {
public:
    NewtonDivergence(const std::string& message, std::complex<double> best)
        : Error(message), best_(best)
    {
    }
    std::complex<double> best_iterate() const noexcept { return best_; }

private:
    std::complex<double> best_;
};

/// Bundle file is malformed or written by an incompatible schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

} // namespace bovdyn
