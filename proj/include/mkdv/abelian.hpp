#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "mkdv/errors.hpp"
#include "mkdv/model.hpp"
#include "mkdv/numerics.hpp"

namespace mkdv {

struct AbelianValues {
    double h = 0.0;
    double b0 = 0.0;
    double bn = 0.0;
    double btilde = 0.0;
    double c0 = 0.0;
    std::optional<double> abelian_i;
    std::optional<double> c0_prime;
};

namespace detail {

// The heteroclinic level is admitted (closed interval on the right); there the
// orbit interval runs saddle to saddle and the turning points are double roots.
inline TurningPoints moment_interval(const ModelParams& p, double h, const Tolerances& tol) {
    const double dn = p.d_n();
    if (!(h > 0.0) || h > dn * (1.0 + 1e-12))
        throw EnergyOutOfRange("moment integral: h=" + std::to_string(h) + " outside (0, " +
                               std::to_string(dn) + "]");
    if (h >= dn * (1.0 - 1e-12))
        return {left_domain_endpoint(p, tol), p.saddle_u(), dn};
    return turning_points(p, h, tol);
}

} // namespace detail

// Contour moment B_k(h) = ∮ uᵏ v du = 2·∫ uᵏ √(2h−2W) du over the orbit interval.
inline double b_moment(const ModelParams& p, double h, int k, const Tolerances& tol = {}) {
    if (k < 0) throw DomainViolation("b_moment: k must be nonnegative");
    const TurningPoints tp = detail::moment_interval(p, h, tol);
    return 2.0 * quad_orbit(
                     OrbitWeight::times_sqrt, [&](double u) { return int_pow(u, k); }, tp, p, tol);
}

inline double b_tilde(const ModelParams& p, double h, const Tolerances& tol = {}) {
    return b_moment(p, h, p.n(), tol) / b_moment(p, h, 0, tol);
}

inline double abelian_integral(const ModelParams& p, double h, double c,
                               const Tolerances& tol = {}) {
    if (!(c > 0.0))
        throw NonPositiveSpeed("abelian_integral: c must be positive, got " + std::to_string(c));
    const double b0 = b_moment(p, h, 0, tol);
    const double bt = b_moment(p, h, p.n(), tol) / b0;
    return std::sqrt(c) * b0 * ((1.0 - 1.0 / c) - bt);
}

inline double limit_speed(const ModelParams& p, double h, const Tolerances& tol = {}) {
    const double bt = b_tilde(p, h, tol);
    if (bt >= 1.0)
        throw SpeedUndefined("limit_speed: Btilde=" + std::to_string(bt) + " >= 1 at h=" +
                             std::to_string(h));
    return 1.0 / (1.0 - bt);
}

inline double limit_speed_derivative(const ModelParams& p, double h, const Tolerances& tol = {}) {
    const double dn = p.d_n();
    if (!(h > 0.0) || !(h < dn))
        throw EnergyOutOfRange("limit_speed_derivative: h=" + std::to_string(h) +
                               " outside (0, " + std::to_string(dn) + ")");
    const double scale = std::fmin(1e-4 * dn, 0.9 * std::fmin(h, dn - h));
    const double bt_prime =
        derivative([&](double x) { return b_tilde(p, x, tol); }, h, scale);
    const double bt = b_tilde(p, h, tol);
    return bt_prime / ((1.0 - bt) * (1.0 - bt));
}

struct HeteroclinicLimit {
    double btilde_limit;
    double c0_limit;
    std::optional<double> closed_form;
};

inline HeteroclinicLimit heteroclinic_limit(const ModelParams& p, const Tolerances& tol = {}) {
    const double bt = b_tilde(p, p.d_n(), tol);
    const double c0 = 1.0 / (1.0 - bt);
    std::optional<double> closed;
    if (p.n() == 2) {
        closed = 3.0 / 5.0;
    } else if (p.n() == 4) {
        // 26 - 15*sqrt(3) = (2 - sqrt(3))^3; the factored log avoids the
        // cancellation in the direct difference.
        const double s3 = std::sqrt(3.0);
        const double log_gap = std::log(2.0 - s3);
        closed = 5.0 * (2.0 * s3 + 3.0 * log_gap) / (4.0 * log_gap);
    }
    return {bt, c0, closed};
}

inline std::vector<AbelianValues> speed_curve(const ModelParams& p,
                                              const std::vector<double>& h_grid,
                                              const Tolerances& tol = {}) {
    std::vector<AbelianValues> out(h_grid.size());
    const double dn = p.d_n();
    parallel_for_indexed(h_grid.size(), [&](std::size_t i) {
        const double h = h_grid[i];
        AbelianValues& a = out[i];
        a.h = h;
        a.b0 = b_moment(p, h, 0, tol);
        a.bn = b_moment(p, h, p.n(), tol);
        a.btilde = a.bn / a.b0;
        if (a.btilde >= 1.0)
            throw SpeedUndefined("speed_curve: Btilde >= 1 at h=" + std::to_string(h));
        a.c0 = 1.0 / (1.0 - a.btilde);
        // The derivative stencil needs interior room; rows at the heteroclinic
        // endpoint report the slope just inside it.
        const double h_d = std::fmin(h, dn * (1.0 - 2e-4));
        a.c0_prime = limit_speed_derivative(p, h_d, tol);
    });
    return out;
}

} // namespace mkdv
