#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <limits>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "mkdv/errors.hpp"
#include "mkdv/model.hpp"
#include "mkdv/roots.hpp"

namespace mkdv {

// ---------------------------------------------------------------------------
// Orbit quadrature
// ---------------------------------------------------------------------------

namespace detail {

// 16-point Gauss-Legendre rule on [-1, 1].
inline constexpr std::array<double, 16> kGlNodes = {
    -0.9894009349916499326, -0.9445750230732325761, -0.8656312023878317439,
    -0.7554044083550030339, -0.6178762444026437484, -0.4580167776572273863,
    -0.2816035507792589132, -0.0950125098376374402, 0.0950125098376374402,
    0.2816035507792589132,  0.4580167776572273863,  0.6178762444026437484,
    0.7554044083550030339,  0.8656312023878317439,  0.9445750230732325761,
    0.9894009349916499326};

inline constexpr std::array<double, 16> kGlWeights = {
    0.0271524594117540949, 0.0622535239386478929, 0.0951585116824927848,
    0.1246289712555338721, 0.1495959888165767321, 0.1691565193950025382,
    0.1826034150449235889, 0.1894506104550684963, 0.1894506104550684963,
    0.1826034150449235889, 0.1691565193950025382, 0.1495959888165767321,
    0.1246289712555338721, 0.0951585116824927848, 0.0622535239386478929,
    0.0271524594117540949};

} // namespace detail

enum class OrbitWeight { times_sqrt, over_sqrt };

// Integrates f(u)·√(2h−2W) du (times_sqrt) or f(u)/√(2h−2W) du (over_sqrt)
// over [u_minus, u_plus]. The substitution u = m + r·sinθ turns the
// square-root edge behavior into a smooth θ-integrand; nodes stay strictly
// interior, so the radicand is evaluated only where it is positive.
template <class F>
double quad_orbit(OrbitWeight weight, F&& f, const TurningPoints& tp, const ModelParams& p,
                  const Tolerances& tol = {}) {
    // Root-finding leaves W(u±) − h at the root tolerance, which lets the
    // radicand dip negative near the edges once panels refine far enough. A few
    // Newton steps push simple-root endpoints to machine accuracy; double-root
    // endpoints (|W'| ~ 0, the heteroclinic level) are left untouched.
    auto polish = [&](double u) {
        for (int i = 0; i < 3; ++i) {
            const PotentialValue pv = potential(p, u);
            if (std::fabs(pv.w_prime) < 1e-6) break;
            const double step = (pv.w - tp.h) / pv.w_prime;
            if (!(std::fabs(step) < 1e-3 * (1.0 + std::fabs(u)))) break;
            u -= step;
        }
        return u;
    };
    const double u_lo = polish(tp.u_minus);
    const double u_hi = polish(tp.u_plus);
    const double m = 0.5 * (u_hi + u_lo);
    const double r = 0.5 * (u_hi - u_lo);
    if (!(r > 0.0))
        throw NegativeRadicand("quad_orbit: empty interval at h=" + std::to_string(tp.h));
    const double neg_guard = 1e-13 * (1.0 + std::fabs(tp.h));
    const double half_pi = std::asin(1.0);

    auto eval = [&](double theta, double& val, double& mag) {
        const double u = m + r * std::sin(theta);
        double rad = 2.0 * (tp.h - potential(p, u).w);
        if (rad < -neg_guard)
            throw NegativeRadicand("quad_orbit: 2h-2W = " + std::to_string(rad) + " at u=" +
                                   std::to_string(u) + " (bad turning points?)");
        rad = std::fmax(rad, 0.0);
        const double jac = r * std::cos(theta);
        double g;
        if (weight == OrbitWeight::times_sqrt) {
            g = f(u) * std::sqrt(rad) * jac;
        } else {
            if (rad <= 0.0)
                throw NegativeRadicand("quad_orbit: vanishing radicand at interior node u=" +
                                       std::to_string(u));
            g = f(u) / std::sqrt(rad) * jac;
        }
        val = g;
        mag = std::fabs(g);
    };

    double prev = 0.0;
    bool have_prev = false;
    for (int panels = 1; panels <= 8192; panels *= 2) {
        const double width = 2.0 * half_pi / panels;
        double sum = 0.0;
        double l1 = 0.0;
        for (int pnl = 0; pnl < panels; ++pnl) {
            const double lo = -half_pi + pnl * width;
            const double mid = lo + 0.5 * width;
            for (std::size_t i = 0; i < detail::kGlNodes.size(); ++i) {
                double val, mag;
                eval(mid + 0.5 * width * detail::kGlNodes[i], val, mag);
                sum += detail::kGlWeights[i] * 0.5 * width * val;
                l1 += detail::kGlWeights[i] * 0.5 * width * mag;
            }
        }
        if (have_prev && std::fabs(sum - prev) <= tol.quad_rel_tol * std::fmax(std::fabs(sum), l1))
            return sum;
        prev = sum;
        have_prev = true;
    }
    throw NonConvergent("quad_orbit: panel doubling exhausted at h=" + std::to_string(tp.h));
}

// ---------------------------------------------------------------------------
// ODE integration (Dormand-Prince 5(4) with dense output and events)
// ---------------------------------------------------------------------------

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N>
struct TracePoint {
    double tau;
    State<N> y;
};

template <std::size_t N>
struct TraceEvent {
    double tau;
    State<N> y;
    std::size_t event_id;
};

template <std::size_t N>
struct OrbitTrace {
    std::vector<TracePoint<N>> samples;
    std::vector<TraceEvent<N>> events;
};

// Event functions are evaluated along the integration direction; `direction`
// filters on the sign of the crossing in that internal time.
template <std::size_t N>
struct EventSpec {
    std::function<double(const State<N>&)> fn;
    int direction = 0;
    int terminal_count = 0;
};

namespace detail {

template <std::size_t N>
struct DenseStep {
    State<N> r1, r2, r3, r4, r5;

    State<N> at(double theta) const {
        State<N> out;
        const double t1 = 1.0 - theta;
        for (std::size_t i = 0; i < N; ++i)
            out[i] = r1[i] + theta * (r2[i] + t1 * (r3[i] + theta * (r4[i] + t1 * r5[i])));
        return out;
    }
};

} // namespace detail

template <std::size_t N, class RHS>
OrbitTrace<N> integrate_ode(RHS&& rhs, const State<N>& y0, double t0, double t1,
                            const std::vector<EventSpec<N>>& events = {},
                            const Tolerances& tol = {}, std::size_t max_steps = 2000000) {
    OrbitTrace<N> trace;
    if (t0 == t1) {
        trace.samples.push_back({t0, y0});
        return trace;
    }
    const double dir = (t1 > t0) ? 1.0 : -1.0;
    const double span = std::fabs(t1 - t0);

    // Backward runs integrate the negated field forward in internal time s.
    auto f = [&](const State<N>& y) {
        State<N> dy = rhs(y);
        if (dir < 0.0)
            for (auto& c : dy) c = -c;
        return dy;
    };

    auto scaled_err = [&](const State<N>& e, const State<N>& ya, const State<N>& yb) {
        double acc = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = tol.ode_abs_tol +
                              tol.ode_rel_tol * std::fmax(std::fabs(ya[i]), std::fabs(yb[i]));
            const double q = e[i] / sc;
            acc += q * q;
        }
        return std::sqrt(acc / N);
    };

    State<N> y = y0;
    State<N> k1 = f(y);
    double s = 0.0;

    // Initial step size from the scaled magnitudes of y and f(y).
    double h;
    {
        double dy0 = 0.0, df0 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = tol.ode_abs_tol + tol.ode_rel_tol * std::fabs(y[i]);
            dy0 += (y[i] / sc) * (y[i] / sc);
            df0 += (k1[i] / sc) * (k1[i] / sc);
        }
        dy0 = std::sqrt(dy0 / N);
        df0 = std::sqrt(df0 / N);
        h = (dy0 > 1e-10 && df0 > 1e-10) ? 0.01 * dy0 / df0 : 1e-6;
        h = std::fmin(h, span);
    }

    trace.samples.push_back({t0, y});
    std::vector<double> ev_prev(events.size());
    std::vector<int> ev_count(events.size(), 0);
    for (std::size_t i = 0; i < events.size(); ++i) ev_prev[i] = events[i].fn(y);

    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                     b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                     d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                     d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;
    (void)c2;
    (void)c3;
    (void)c4;
    (void)c5;

    double err_prev = 1.0;
    for (std::size_t step = 0; step < max_steps; ++step) {
        if (s >= span) break;
        h = std::fmin(h, span - s);
        const double h_min = 16.0 * std::numeric_limits<double>::epsilon() * std::fmax(1.0, s);
        if (h < h_min)
            throw StepUnderflow("integrate_ode: step collapsed to " + std::to_string(h) +
                                " at internal time " + std::to_string(s));

        State<N> k2, k3, k4, k5, k6, k7, yt, y_new, err;
        for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * a21 * k1[i];
        k2 = f(yt);
        for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        k3 = f(yt);
        for (std::size_t i = 0; i < N; ++i)
            yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        k4 = f(yt);
        for (std::size_t i = 0; i < N; ++i)
            yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        k5 = f(yt);
        for (std::size_t i = 0; i < N; ++i)
            yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                a65 * k5[i]);
        k6 = f(yt);
        for (std::size_t i = 0; i < N; ++i)
            y_new[i] =
                y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        k7 = f(y_new);
        for (std::size_t i = 0; i < N; ++i)
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                          e7 * k7[i]);

        double err_norm = scaled_err(err, y, y_new);
        if (!std::isfinite(err_norm)) err_norm = 1e10;
        if (err_norm > 1.0) {
            h *= std::fmax(0.2, 0.9 * std::pow(err_norm, -0.2));
            continue;
        }

        detail::DenseStep<N> dense;
        for (std::size_t i = 0; i < N; ++i) {
            const double dy = y_new[i] - y[i];
            dense.r1[i] = y[i];
            dense.r2[i] = dy;
            dense.r3[i] = h * k1[i] - dy;
            dense.r4[i] = dy - h * k7[i] - dense.r3[i];
            dense.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                               d7 * k7[i]);
        }

        const double s_new = s + h;
        struct Hit {
            double theta;
            std::size_t id;
        };
        std::vector<Hit> hits;
        for (std::size_t i = 0; i < events.size(); ++i) {
            const double e_new = events[i].fn(y_new);
            int cross = 0;
            if (ev_prev[i] < 0.0 && e_new >= 0.0) cross = +1;
            else if (ev_prev[i] > 0.0 && e_new <= 0.0) cross = -1;
            if (cross != 0 && (events[i].direction == 0 || events[i].direction == cross)) {
                double lo = 0.0, hi = 1.0;
                double e_lo = ev_prev[i];
                for (int it = 0; it < 200 && h * (hi - lo) > tol.root_tol; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double e_mid = events[i].fn(dense.at(mid));
                    if ((e_lo < 0.0) == (e_mid < 0.0)) {
                        lo = mid;
                        e_lo = e_mid;
                    } else {
                        hi = mid;
                    }
                }
                hits.push_back({0.5 * (lo + hi), i});
            }
            ev_prev[i] = e_new;
        }
        std::sort(hits.begin(), hits.end(),
                  [](const Hit& a, const Hit& b) { return a.theta < b.theta; });

        bool terminated = false;
        for (const Hit& hit : hits) {
            const State<N> y_ev = dense.at(hit.theta);
            const double s_ev = s + hit.theta * h;
            trace.events.push_back({t0 + dir * s_ev, y_ev, hit.id});
            const int cap = events[hit.id].terminal_count;
            if (cap > 0 && ++ev_count[hit.id] >= cap) {
                trace.samples.push_back({t0 + dir * s_ev, y_ev});
                terminated = true;
                break;
            }
        }
        if (terminated) break;

        trace.samples.push_back({t0 + dir * s_new, y_new});
        for (std::size_t i = 0; i < N; ++i)
            if (std::fabs(y_new[i]) > 1e8)
                throw BlowUp("integrate_ode: state exceeded 1e8 at internal time " +
                             std::to_string(s_new));

        s = s_new;
        y = y_new;
        k1 = k7;
        const double fac = 0.9 * std::pow(err_norm > 0.0 ? err_norm : 1e-10, -0.17) *
                           std::pow(err_prev, 0.04);
        h *= std::clamp(fac, 0.2, 5.0);
        err_prev = std::fmax(err_norm, 1e-4);
    }

    if (dir < 0.0) {
        std::reverse(trace.samples.begin(), trace.samples.end());
        std::reverse(trace.events.begin(), trace.events.end());
    }
    return trace;
}

// ---------------------------------------------------------------------------
// Differentiation
// ---------------------------------------------------------------------------

// Central differences at three step sizes, Richardson-extrapolated twice.
template <class F>
double derivative(F&& f, double x, double scale) {
    auto central = [&](double s) { return (f(x + s) - f(x - s)) / (2.0 * s); };
    const double a1 = central(scale);
    const double a2 = central(scale / 2.0);
    const double a3 = central(scale / 4.0);
    const double r12 = (4.0 * a2 - a1) / 3.0;
    const double r23 = (4.0 * a3 - a2) / 3.0;
    return (16.0 * r23 - r12) / 15.0;
}

// ---------------------------------------------------------------------------
// Index-parallel evaluation with deterministic ordering
// ---------------------------------------------------------------------------

// Runs body(i) for i in [0, count) across available threads; the first
// exception in index order is rethrown after all workers finish.
template <class F>
void parallel_for_indexed(std::size_t count, F&& body) {
    const unsigned hw = std::thread::hardware_concurrency();
    const std::size_t workers = std::min<std::size_t>(hw > 0 ? hw : 1, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace mkdv
