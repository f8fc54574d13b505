#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "mkdv/abelian.hpp"
#include "mkdv/errors.hpp"
#include "mkdv/model.hpp"
#include "mkdv/numerics.hpp"

namespace mkdv {

struct TimeIntegrals {
    double int_v2;
    double int_upp2;
    double int_unv2;
    double period;
};

struct ReturnMapResult {
    double tau2;
    double tau1;
    double u_at_tau1;
    double u_at_tau2;
    double psi;
};

struct LimitCycleResult {
    double h_star;
    double u0_star;
    OrbitTrace<2> cycle;
    double predicted_h;
};

namespace detail {

inline auto reduced_field(const ModelParams& p) {
    return [p](const State<2>& y) -> State<2> {
        const PhaseState2 d = rhs_reduced(p, {y[0], y[1]});
        return {d.u, d.v};
    };
}

inline auto full_field(const ModelParams& p) {
    return [p](const State<3>& y) -> State<3> {
        const PhaseState3 d = rhs_full(p, {y[0], y[1], y[2]});
        return {d.u, d.v, d.w};
    };
}

inline double half_period(const ModelParams& p, double h, const Tolerances& tol) {
    const TurningPoints tp = turning_points(p, h, tol);
    return quad_orbit(
        OrbitWeight::over_sqrt, [](double) { return 1.0; }, tp, p, tol);
}

inline EventSpec<2> v_section(int direction, int terminal_count) {
    return {[](const State<2>& y) { return y[1]; }, direction, terminal_count};
}

} // namespace detail

// One closed orbit of the conservative core, period detected as the second
// return to the v = 0 section.
inline OrbitTrace<2> orbit_on_level(const ModelParams& p, double h, const Tolerances& tol = {}) {
    if (p.eps() != 0.0)
        throw DomainViolation("orbit_on_level: the level orbit is defined for eps=0");
    const TurningPoints tp = turning_points(p, h, tol);
    const double period = 2.0 * detail::half_period(p, h, tol);
    OrbitTrace<2> trace =
        integrate_ode<2>(detail::reduced_field(p), {tp.u_plus, 0.0}, 0.0, 1.25 * period,
                         {detail::v_section(0, 2)}, tol);
    if (trace.events.size() < 2)
        throw PeriodNotFound("orbit_on_level: no second section return within 1.25 periods at h=" +
                             std::to_string(h));
    return trace;
}

inline TimeIntegrals time_integrals(const ModelParams& p, double h, const Tolerances& tol = {}) {
    const TurningPoints tp = turning_points(p, h, tol);
    TimeIntegrals ti;
    ti.int_v2 = b_moment(p, h, 0, tol);
    ti.int_unv2 = b_moment(p, h, p.n(), tol);
    ti.int_upp2 = 2.0 * quad_orbit(
                            OrbitWeight::over_sqrt,
                            [&](double u) {
                                const double wp = potential(p, u).w_prime;
                                return wp * wp;
                            },
                            tp, p, tol);
    ti.period = 2.0 * quad_orbit(
                          OrbitWeight::over_sqrt, [](double) { return 1.0; }, tp, p, tol);
    return ti;
}

inline double psi_hat(const ModelParams& p, double h, double c, const Tolerances& tol = {}) {
    if (!(c > 0.0))
        throw NonPositiveSpeed("psi_hat: c must be positive, got " + std::to_string(c));
    const TimeIntegrals ti = time_integrals(p, h, tol);
    return (c * ti.int_upp2 - ti.int_v2) / std::sqrt(c);
}

inline double c0_from_energy_balance(const ModelParams& p, double h, const Tolerances& tol = {}) {
    const TimeIntegrals ti = time_integrals(p, h, tol);
    return ti.int_v2 / ti.int_upp2;
}

// H-difference over one full return through (u0, 0): backward to the previous
// v = 0 crossing, forward to the next one.
inline ReturnMapResult return_map_psi(const ModelParams& p, double u0, const Tolerances& tol = {}) {
    if (!(u0 > 0.0) || !(u0 < p.saddle_u()))
        throw DomainViolation("return_map_psi: u0=" + std::to_string(u0) +
                              " outside (0, " + std::to_string(p.saddle_u()) + ")");
    const double h0 = potential(p, u0).w;
    const double horizon = 3.0 * detail::half_period(p, h0, tol);
    const auto field = detail::reduced_field(p);

    const OrbitTrace<2> fwd =
        integrate_ode<2>(field, {u0, 0.0}, 0.0, horizon, {detail::v_section(0, 1)}, tol);
    if (fwd.events.empty())
        throw NoReturn("return_map_psi: no forward section crossing from u0=" +
                       std::to_string(u0));
    const OrbitTrace<2> bwd =
        integrate_ode<2>(field, {u0, 0.0}, 0.0, -horizon, {detail::v_section(0, 1)}, tol);
    if (bwd.events.empty())
        throw NoReturn("return_map_psi: no backward section crossing from u0=" +
                       std::to_string(u0));

    const TraceEvent<2>& ef = fwd.events.front();
    const TraceEvent<2>& eb = bwd.events.front();
    ReturnMapResult r;
    r.tau1 = ef.tau;
    r.tau2 = eb.tau;
    r.u_at_tau1 = ef.y[0];
    r.u_at_tau2 = eb.y[0];
    r.psi = hamiltonian(p, {ef.y[0], ef.y[1]}) - hamiltonian(p, {eb.y[0], eb.y[1]});
    return r;
}

namespace detail {

// H at the section endpoints must resolve to a few parts in 1e11 for the
// shooting targets below; the flow runs three decades tighter than the
// configured tolerance.
inline Tolerances shooting_tolerances(const Tolerances& tol) {
    Tolerances t = tol;
    t.ode_rel_tol = tol.ode_rel_tol * 1e-3;
    t.ode_abs_tol = tol.ode_abs_tol * 1e-3;
    return t;
}

} // namespace detail

inline double solve_wave_speed(const ModelParams& p, double h, double eps,
                               const Tolerances& tol = {}) {
    if (!(h > 0.0) || !(h < p.d_n()))
        throw EnergyOutOfRange("solve_wave_speed: h=" + std::to_string(h) + " outside (0, " +
                               std::to_string(p.d_n()) + ")");
    if (eps < 0.0) throw NegativeEps("solve_wave_speed: eps=" + std::to_string(eps));
    if (eps == 0.0) return limit_speed(p, h, tol);
    if (eps > 0.05)
        throw DomainViolation("solve_wave_speed: eps=" + std::to_string(eps) +
                              " beyond the supported shooting range (0.05]");

    const double c0 = limit_speed(p, h, tol);
    const double u0 = turning_points(p, h, tol).u_plus;
    const Tolerances ode = detail::shooting_tolerances(tol);
    auto psi_at = [&](double c) {
        return return_map_psi(ModelParams(p.n(), c, eps), u0, ode).psi;
    };
    const double psi_tol = 1e-10 * h;

    double cl = c0, fl = psi_at(c0);
    if (std::fabs(fl) <= psi_tol) return cl;
    double ch = cl, fh = fl;
    bool bracketed = false;
    for (double g : {0.02, 0.05, 0.1, 0.2, 0.35, 0.5}) {
        const double c_try = fl > 0.0 ? c0 * (1.0 - g) : c0 * (1.0 + g);
        const double f_try = psi_at(c_try);
        if (std::fabs(f_try) <= psi_tol) return c_try;
        if (f_try * fl < 0.0) {
            ch = c_try;
            fh = f_try;
            bracketed = true;
            break;
        }
        cl = c_try;
        fl = f_try;
    }
    if (!bracketed)
        throw NoConvergence("solve_wave_speed: no sign change of psi within 50% of c0=" +
                            std::to_string(c0));
    if (cl > ch) {
        std::swap(cl, ch);
        std::swap(fl, fh);
    }

    double x0 = cl, f0 = fl, x1 = ch, f1 = fh;
    for (int iter = 0; iter < tol.max_iter; ++iter) {
        double x2 = (f1 != f0) ? x1 - f1 * (x1 - x0) / (f1 - f0) : 0.5 * (cl + ch);
        if (!(x2 > cl) || !(x2 < ch)) x2 = 0.5 * (cl + ch);
        const double f2 = psi_at(x2);
        if (std::fabs(f2) <= psi_tol) return x2;
        if (f2 * fl < 0.0) {
            ch = x2;
            fh = f2;
        } else {
            cl = x2;
            fl = f2;
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
        if (ch - cl <= 1e-13 * std::fmax(1.0, c0))
            throw NoConvergence("solve_wave_speed: bracket collapsed before |psi| <= " +
                                std::to_string(psi_tol));
    }
    throw NoConvergence("solve_wave_speed: iteration cap reached");
}

inline LimitCycleResult find_limit_cycle(const ModelParams& p, const Tolerances& tol = {}) {
    if (!(p.eps() > 0.0))
        throw DomainViolation("find_limit_cycle: eps must be positive");
    const double target = 1.0 - 1.0 / p.c();
    const double dn = p.d_n();
    const double h_lo = 1e-6 * dn;
    const double bt_lo = b_tilde(p, h_lo, tol);
    const double bt_hi = b_tilde(p, dn, tol);
    if (!(target > bt_lo) || !(target < bt_hi))
        throw NoCycle("find_limit_cycle: 1-1/c=" + std::to_string(target) +
                      " outside the range (" + std::to_string(bt_lo) + ", " +
                      std::to_string(bt_hi) + ") of Btilde on (0, d_n]");
    const double predicted_h =
        find_root([&](double h) { return b_tilde(p, h, tol) - target; }, h_lo, dn, tol);

    const double u_p = turning_points(p, predicted_h, tol).u_plus;
    const Tolerances ode = detail::shooting_tolerances(tol);
    auto psi_at = [&](double u0) { return return_map_psi(p, u0, ode).psi; };

    const double u_cap = p.saddle_u() * (1.0 - 1e-6);
    double lo = u_p, hi = u_p, f_lo = 0.0, f_hi = 0.0;
    bool bracketed = false;
    for (double d : {0.01, 0.02, 0.05, 0.1, 0.2}) {
        lo = std::fmax(u_p * (1.0 - d), 1e-6);
        hi = std::fmin(u_p * (1.0 + d), u_cap);
        f_lo = psi_at(lo);
        f_hi = psi_at(hi);
        if (f_lo * f_hi < 0.0) {
            bracketed = true;
            break;
        }
    }
    if (!bracketed)
        throw NoConvergence("find_limit_cycle: psi does not change sign near u0=" +
                            std::to_string(u_p));
    Tolerances rt = tol;
    rt.root_tol = std::fmax(tol.root_tol, 1e-11);
    const double u0_star = find_root(psi_at, lo, hi, rt);
    const double h_star = potential(p, u0_star).w;

    const double horizon = 3.0 * detail::half_period(p, h_star, tol);
    OrbitTrace<2> cycle = integrate_ode<2>(detail::reduced_field(p), {u0_star, 0.0}, 0.0, horizon,
                                           {detail::v_section(0, 2)}, tol);
    if (cycle.events.size() < 2)
        throw NoReturn("find_limit_cycle: cycle trace did not close");
    return {h_star, u0_star, std::move(cycle), predicted_h};
}

// Largest distance between the integrated w and the slow-manifold graph after
// the fast transient has contracted (five fast time constants).
inline double manifold_residual(const ModelParams& p, const PhaseState3& init, double t0,
                                double t1, const Tolerances& tol = {}) {
    if (p.eps() == 0.0)
        throw SingularFastField("manifold_residual: the fast field needs eps > 0");
    if (!(t1 > t0))
        throw DomainViolation("manifold_residual: t_span must run forward");
    const double burn_in = 5.0 * p.eps() * p.sqrt_c();
    const OrbitTrace<3> trace =
        integrate_ode<3>(detail::full_field(p), {init.u, init.v, init.w}, t0, t1, {}, tol);
    double max_res = 0.0;
    for (const auto& s : trace.samples) {
        if (s.tau < t0 + burn_in) continue;
        const double res = std::fabs(s.y[2] - slow_manifold_w(p, {s.y[0], s.y[1]}));
        max_res = std::fmax(max_res, res);
    }
    return max_res;
}

} // namespace mkdv
