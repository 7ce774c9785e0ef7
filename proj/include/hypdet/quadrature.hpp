#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace hypdet {

// Adaptive Simpson quadrature with absolute tolerance.  Suitable for the
// smooth, rapidly decaying integrands used throughout (Gaussian-weighted
// heat kernels); not a general-purpose oscillatory integrator.
namespace quad {

namespace detail {

inline double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive(F&& f, double a, double fa, double b, double fb, double m, double fm,
                double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

} // namespace detail

// integral of f over [a, b] to absolute tolerance abs_tol.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol, int max_depth = 48) {
    if (!(abs_tol > 0.0)) throw std::invalid_argument("integrate: abs_tol must be > 0");
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = detail::simpson(a, fa, b, fb, fm);
    return detail::adaptive(f, a, fa, b, fb, m, fm, whole, abs_tol, max_depth);
}

} // namespace quad

// Compensated (Kahan) accumulator: fixed-order summation stays bit-stable
// across runs and platforms with the same FP environment.
class KahanSum {
public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

} // namespace hypdet
