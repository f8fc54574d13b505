#pragma once

#include <cmath>
#include <cstdlib>
#include <string>

#include "mkdv/errors.hpp"

namespace mkdv {

struct Tolerances {
    double root_tol = 1e-12;
    double quad_rel_tol = 1e-10;
    double ode_rel_tol = 1e-10;
    double ode_abs_tol = 1e-12;
    int max_iter = 200;
};

// Bracketed hybrid solver (Brent: bisection / secant / inverse quadratic).
// Terminates on |f| <= root_tol or bracket width <= root_tol; never leaves [a,b].
template <class F>
double find_root(F&& f, double a, double b, const Tolerances& tol = {}) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0)
        throw NoSignChange("find_root: f has no sign change on [" + std::to_string(a) + ", " +
                           std::to_string(b) + "]");
    if (std::fabs(fa) < std::fabs(fb)) {
        std::swap(a, b);
        std::swap(fa, fb);
    }
    double c = a, fc = fa;   // previous iterate
    double d = b - a;        // step before last
    bool bisected = true;
    for (int iter = 0; iter < tol.max_iter; ++iter) {
        if (std::fabs(fb) <= tol.root_tol) return b;
        if (std::fabs(b - a) <= tol.root_tol) return b;
        double s;
        if (fa != fc && fb != fc) {
            s = a * fb * fc / ((fa - fb) * (fa - fc)) + b * fa * fc / ((fb - fa) * (fb - fc)) +
                c * fa * fb / ((fc - fa) * (fc - fb));
        } else {
            s = b - fb * (b - a) / (fb - fa);
        }
        const double lo = (3.0 * a + b) / 4.0;
        const bool out_of_range = (s < std::fmin(lo, b)) || (s > std::fmax(lo, b));
        const bool slow = bisected ? std::fabs(s - b) >= std::fabs(b - c) / 2.0
                                   : std::fabs(s - b) >= std::fabs(c - d) / 2.0;
        if (out_of_range || slow) {
            s = 0.5 * (a + b);
            bisected = true;
        } else {
            bisected = false;
        }
        const double fs = f(s);
        d = c;
        c = b;
        fc = fb;
        if (fa * fs < 0.0) {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if (std::fabs(fa) < std::fabs(fb)) {
            std::swap(a, b);
            std::swap(fa, fb);
        }
    }
    throw MaxIterations("find_root: no convergence within " + std::to_string(tol.max_iter) +
                        " iterations");
}

} // namespace mkdv
