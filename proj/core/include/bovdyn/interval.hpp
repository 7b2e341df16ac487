#pragma once

// Outward-rounded interval arithmetic over the expression language.
//
// Rounding model: every endpoint is computed in round-to-nearest and then
// moved one ulp outward (two ulps for exp, and one ulp per multiplication for
// integer powers). No rounding-mode switches are needed. Translation units
// that compute endpoints are built with -ffp-contract=off.

#include "bovdyn/expr.hpp"

#include <string>
#include <vector>

namespace bovdyn {

class Interval {
public:
    /// Throws IntervalDomainError if lo > hi or either endpoint is not finite.
    Interval(double lo, double hi);
    static Interval point(double x) { return Interval(x, x); }

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    double width() const noexcept { return hi_ - lo_; }
    double mid() const noexcept { return lo_ + 0.5 * (hi_ - lo_); }
    bool is_point() const noexcept { return lo_ == hi_; }

    bool contains(double x) const noexcept { return lo_ <= x && x <= hi_; }
    bool contains_zero() const noexcept { return lo_ <= 0.0 && 0.0 <= hi_; }
    bool subset_of(const Interval& other) const noexcept
    {
        return other.lo_ <= lo_ && hi_ <= other.hi_;
    }

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    double lo_;
    double hi_;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
/// Throws IntervalDivisionByZero when b contains zero.
Interval operator/(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval exp(const Interval& x);
Interval pow(const Interval& x, int exponent);

/// Enclosure of e over x. The map must be real on the real line: constants
/// and bound parameters need a zero imaginary part.
Interval ieval(const MapExpr& e, const Interval& x);

enum class Sign { Positive, Negative, Indeterminate };

const char* to_string(Sign s);

/// One step of the derivative sign cascade.
struct CascadeStep {
    int order = 0;                 ///< derivative order whose sign is concluded
    double endpoint = 0.0;         ///< where that derivative's sign was checked
    Sign endpoint_sign = Sign::Indeterminate;
    Sign interval_sign = Sign::Indeterminate;  ///< concluded sign on the whole domain

    friend bool operator==(const CascadeStep&, const CascadeStep&) = default;
};

struct SignCertificate {
    enum class Method { Bisection, Cascade };

    MapExpr target;
    Interval domain{0.0, 0.0};
    Sign verdict = Sign::Indeterminate;
    Method method = Method::Bisection;
    int max_depth = 0;
    int order = 0;                  ///< cascade order; 0 for bisection
    int subdivisions = 0;           ///< interval splits performed
    bool max_depth_hit = false;
    std::vector<Interval> leaves;   ///< bisection leaves carrying the verdict
    std::vector<CascadeStep> cascade_trace;

    friend bool operator==(const SignCertificate&, const SignCertificate&) = default;
};

inline constexpr int kDefaultMaxDepth = 40;

/// Adaptive bisection sign proof. Indeterminate when some leaf at max_depth
/// still straddles zero or when leaves disagree in sign.
SignCertificate certify_sign(const MapExpr& e, const Interval& x, int max_depth = kDefaultMaxDepth);

/// Sign proof by walking derivative orders downward: the sign of the
/// (k+1)-th derivative on x fixes the monotonicity of the k-th, whose sign
/// at the right endpoint then bounds it on all of x. When the right
/// endpoint is not conclusive the left endpoint is tried.
SignCertificate cascade_sign(const MapExpr& e, const Interval& x, int order,
                             int max_depth = kDefaultMaxDepth);

/// Re-runs the generating procedure and compares with the stored certificate.
bool replay(const SignCertificate& cert);

} // namespace bovdyn
