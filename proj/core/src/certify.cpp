#include "bovdyn/errors.hpp"
#include "bovdyn/interval.hpp"

#include <optional>
#include <utility>

namespace bovdyn {

namespace {

struct Pending {
    Interval domain;
    int depth;
};

Sign leaf_sign(const Interval& r)
{
    if (r.lo() > 0.0)
        return Sign::Positive;
    if (r.hi() < 0.0)
        return Sign::Negative;
    return Sign::Indeterminate;
}

} // namespace

SignCertificate certify_sign(const MapExpr& e, const Interval& x, int max_depth)
{
    if (max_depth < 1)
        throw Error("certify_sign: max_depth must be at least 1");

    SignCertificate cert;
    cert.target = e;
    cert.domain = x;
    cert.method = SignCertificate::Method::Bisection;
    cert.max_depth = max_depth;

    std::optional<Sign> seen;
    std::vector<Pending> stack{{x, 0}};
    while (!stack.empty()) {
        const Pending cur = stack.back();
        stack.pop_back();

        Sign s = Sign::Indeterminate;
        std::optional<IntervalDivisionByZero> division;
        try {
            s = leaf_sign(ieval(e, cur.domain));
        } catch (const IntervalDivisionByZero& err) {
            division = err;
        } catch (const IntervalDomainError&) {
        }

        if (s != Sign::Indeterminate) {
            if (seen && *seen != s) {
                cert.verdict = Sign::Indeterminate;
                return cert;
            }
            seen = s;
            cert.leaves.push_back(cur.domain);
            continue;
        }

        const double m = cur.domain.mid();
        const bool splittable = m > cur.domain.lo() && m < cur.domain.hi();
        if (cur.depth >= max_depth || !splittable) {
            cert.max_depth_hit = true;
            if (division)
                throw *division;
            cert.verdict = Sign::Indeterminate;
            return cert;
        }
        ++cert.subdivisions;
        stack.push_back({Interval(m, cur.domain.hi()), cur.depth + 1});
        stack.push_back({Interval(cur.domain.lo(), m), cur.depth + 1});
    }
    cert.verdict = seen.value_or(Sign::Indeterminate);
    return cert;
}

SignCertificate cascade_sign(const MapExpr& e, const Interval& x, int order, int max_depth)
{
    if (order < 1)
        throw Error("cascade_sign: order must be at least 1");

    std::vector<MapExpr> derivs{e};
    for (int k = 1; k <= order; ++k)
        derivs.push_back(differentiate(derivs.back()));

    SignCertificate cert;
    cert.target = e;
    cert.domain = x;
    cert.method = SignCertificate::Method::Cascade;
    cert.max_depth = max_depth;
    cert.order = order;

    const Interval left = Interval::point(x.lo());
    const Interval right = Interval::point(x.hi());

    SignCertificate top = certify_sign(derivs[order], x, max_depth);
    cert.subdivisions = top.subdivisions;
    cert.max_depth_hit = top.max_depth_hit;
    cert.leaves = top.leaves;
    cert.cascade_trace.push_back(
        {order, x.hi(), certify_sign(derivs[order], right, max_depth).verdict, top.verdict});

    Sign derivative_sign = top.verdict;
    for (int k = order - 1; k >= 0 && derivative_sign != Sign::Indeterminate; --k) {
        CascadeStep step{k, x.hi(), certify_sign(derivs[k], right, max_depth).verdict,
                         Sign::Indeterminate};
        // Increasing: maximum at the right end, minimum at the left end.
        // Decreasing: the reverse.
        const Sign right_rule = derivative_sign == Sign::Positive ? Sign::Negative : Sign::Positive;
        if (step.endpoint_sign == right_rule) {
            step.interval_sign = right_rule;
        } else {
            const Sign left_rule = derivative_sign == Sign::Positive ? Sign::Positive : Sign::Negative;
            const Sign at_left = certify_sign(derivs[k], left, max_depth).verdict;
            if (at_left == left_rule) {
                step.endpoint = x.lo();
                step.endpoint_sign = at_left;
                step.interval_sign = left_rule;
            }
        }
        cert.cascade_trace.push_back(step);
        derivative_sign = step.interval_sign;
    }
    cert.verdict = cert.cascade_trace.back().order == 0 ? derivative_sign : Sign::Indeterminate;
    return cert;
}

bool replay(const SignCertificate& cert)
{
    if (cert.method == SignCertificate::Method::Cascade)
        return cascade_sign(cert.target, cert.domain, cert.order, cert.max_depth) == cert;
    return certify_sign(cert.target, cert.domain, cert.max_depth) == cert;
}

} // namespace bovdyn
