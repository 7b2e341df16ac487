#include "bovdyn/dynamics.hpp"
#include "bovdyn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace bovdyn {

CriticalSet critical_set_closed_form(Complex lambda, int k_min, int k_max)
{
    if (k_min > k_max)
        throw Error("critical_set_closed_form: empty index range");
    MapExpr f = parse("lambda/(exp(z)+z)").with_param("lambda", lambda);
    const Evaluator df(differentiate(f));

    CriticalSet out;
    std::ostringstream w;
    w << "k in [" << k_min << "," << k_max << "]";
    out.window = w.str();
    for (int k = k_min; k <= k_max; ++k) {
        const Complex z(0.0, std::numbers::pi * (2.0 * k + 1.0));
        const EvalOutcome d = df(z);
        const double residual = d.finite() ? std::abs(d.value) : std::numeric_limits<double>::infinity();
        if (!(residual < 1e-10))
            throw Error("critical point check failed at k = " + std::to_string(k));
        out.max_residual = std::max(out.max_residual, residual);
        out.points.push_back(z);
        out.values.push_back(lambda / (Complex(-1.0, 0.0) + z));
    }
    return out;
}

CriticalSet find_critical_points_newton(const MapExpr& f, const Rect& window, int grid)
{
    if (grid < 4)
        throw Error("find_critical_points_newton: grid must be at least 4");
    if (!(window.re_max > window.re_min) || !(window.im_max > window.im_min))
        throw Error("find_critical_points_newton: empty window");

    const MapExpr d1 = differentiate(f);
    const Evaluator ev(f);
    const Evaluator df(d1);
    const Evaluator d2f(differentiate(d1));

    std::vector<Complex> found;
    const double dx = (window.re_max - window.re_min) / grid;
    const double dy = (window.im_max - window.im_min) / grid;
    for (int j = 0; j < grid; ++j) {
        for (int i = 0; i < grid; ++i) {
            Complex z(window.re_min + (i + 0.5) * dx, window.im_min + (j + 0.5) * dy);
            bool converged = false;
            for (int it = 0; it < 80; ++it) {
                const EvalOutcome a = df(z);
                const EvalOutcome b = d2f(z);
                if (!a.finite() || !b.finite() || b.value == Complex(0.0, 0.0))
                    break;
                const Complex step = a.value / b.value;
                z -= step;
                if (std::abs(step) <= 1e-13 * (1.0 + std::abs(z))) {
                    converged = true;
                    break;
                }
            }
            if (converged && window.contains(z) && df(z).finite() && ev(z).finite())
                found.push_back(z);
        }
    }

    std::sort(found.begin(), found.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    CriticalSet out;
    std::ostringstream w;
    w.precision(17);
    w << "[" << window.re_min << "," << window.re_max << "]x[" << window.im_min << ","
      << window.im_max << "] grid " << grid;
    out.window = w.str();
    for (Complex z : found) {
        const bool dup = std::any_of(out.points.begin(), out.points.end(),
                                     [&](Complex p) { return std::abs(p - z) <= 1e-8; });
        if (dup)
            continue;
        out.points.push_back(z);
        out.values.push_back(ev(z).value);
        out.max_residual = std::max(out.max_residual, std::abs(df(z).value));
    }
    return out;
}

} // namespace bovdyn
