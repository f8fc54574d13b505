#pragma once

#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "mkdv/errors.hpp"
#include "mkdv/roots.hpp"

namespace mkdv {

// Integer power by squaring; keeps uⁿ exact in sign for negative u and odd n
// and avoids pow()'s transcendental round-off.
inline double int_pow(double u, int n) {
    double acc = 1.0;
    double base = u;
    for (int e = n; e > 0; e >>= 1) {
        if (e & 1) acc *= base;
        base *= base;
    }
    return acc;
}

struct PhaseState2 {
    double u = 0.0;
    double v = 0.0;
};

struct PhaseState3 {
    double u = 0.0;
    double v = 0.0;
    double w = 0.0;
};

class ModelParams {
public:
    ModelParams(int n, double c, double eps) : n_(n), c_(c), eps_(eps) {
        if (n < 1) throw NonPositiveN("n must be a positive integer, got n=" + std::to_string(n));
        if (!(c > 0.0)) throw NonPositiveSpeed("wave speed must be positive, got c=" + std::to_string(c));
        if (eps < 0.0) throw NegativeEps("perturbation must be nonnegative, got eps=" + std::to_string(eps));
        d_n_ = n_ * std::pow(n_ + 1.0, 2.0 / n_) / (2.0 * (n_ + 2.0));
        saddle_u_ = std::pow(n_ + 1.0, 1.0 / n_);
        sqrt_c_ = std::sqrt(c_);
    }

    int n() const { return n_; }
    double c() const { return c_; }
    double eps() const { return eps_; }
    double d_n() const { return d_n_; }
    double saddle_u() const { return saddle_u_; }
    double sqrt_c() const { return sqrt_c_; }

    ModelParams with_c(double c) const { return ModelParams(n_, c, eps_); }
    ModelParams with_eps(double eps) const { return ModelParams(n_, c_, eps); }

private:
    int n_;
    double c_;
    double eps_;
    double d_n_;
    double saddle_u_;
    double sqrt_c_;
};

inline ModelParams validate_params(int n, double c, double eps) {
    return ModelParams(n, c, eps);
}

struct PotentialValue {
    double w;
    double w_prime;
};

inline PotentialValue potential(const ModelParams& p, double u) {
    const int n = p.n();
    const double un = int_pow(u, n);
    const double w = 0.5 * u * u - un * u * u / ((n + 1.0) * (n + 2.0));
    const double w_prime = u - un * u / (n + 1.0);
    return {w, w_prime};
}

inline double hamiltonian(const ModelParams& p, const PhaseState2& s) {
    return 0.5 * s.v * s.v + potential(p, s.u).w;
}

enum class EquilibriumKind { center, saddle };

struct Equilibrium {
    double u;
    EquilibriumKind kind;
};

inline std::vector<Equilibrium> equilibria(const ModelParams& p) {
    std::vector<Equilibrium> out;
    out.push_back({0.0, EquilibriumKind::center});
    out.push_back({p.saddle_u(), EquilibriumKind::saddle});
    if (p.n() % 2 == 0) out.push_back({-p.saddle_u(), EquilibriumKind::saddle});
    return out;
}

struct TurningPoints {
    double u_minus;
    double u_plus;
    double h;
};

// Left end of the orbit domain at the critical energy: the mirror saddle for
// even n, the negative root n_* of W(u) = d_n for odd n.
inline double left_domain_endpoint(const ModelParams& p, const Tolerances& tol = {}) {
    if (p.n() % 2 == 0) return -p.saddle_u();
    const double dn = p.d_n();
    auto f = [&](double u) { return potential(p, u).w - dn; };
    double b = 1.0;
    while (f(-b) < 0.0) b *= 2.0;
    return find_root(f, -b, 0.0, tol);
}

inline TurningPoints turning_points(const ModelParams& p, double h, const Tolerances& tol = {}) {
    if (!(h > 0.0) || !(h < p.d_n()))
        throw EnergyOutOfRange("turning_points: h=" + std::to_string(h) + " outside (0, " +
                               std::to_string(p.d_n()) + ")");
    auto f = [&](double u) { return potential(p, u).w - h; };
    const double u_plus = find_root(f, 0.0, p.saddle_u(), tol);
    const double u_minus = find_root(f, left_domain_endpoint(p, tol), 0.0, tol);
    return {u_minus, u_plus, h};
}

// Reduced planar field: the traveling-wave system with the first-order
// perturbation term in v; eps = 0 gives the conservative core.
inline PhaseState2 rhs_reduced(const ModelParams& p, const PhaseState2& s) {
    const double w_prime = potential(p, s.u).w_prime;
    double dv = -w_prime;
    if (p.eps() != 0.0) {
        const double un = int_pow(s.u, p.n());
        dv += p.eps() * (-p.sqrt_c()) * (un + (-1.0 + 1.0 / p.c())) * s.v;
    }
    return {s.v, dv};
}

// Full fast-slow field; the w equation carries the stiff 1/(eps·√c) factor.
inline PhaseState3 rhs_full(const ModelParams& p, const PhaseState3& s) {
    if (p.eps() == 0.0)
        throw SingularFastField("the 3D field divides by eps·sqrt(c); eps must be positive");
    const int n = p.n();
    const double unp1 = int_pow(s.u, n + 1);
    const double dw =
        (-s.u + unp1 / (n + 1.0) - s.w - (p.eps() / p.sqrt_c()) * s.v) / (p.eps() * p.sqrt_c());
    return {s.v, s.w, dw};
}

// First-order slow-manifold graph w = w0(u) + eps·g2(u,v).
inline double slow_manifold_w(const ModelParams& p, const PhaseState2& s) {
    const int n = p.n();
    const double w0 = -s.u + int_pow(s.u, n + 1) / (n + 1.0);
    const double g2 = -p.sqrt_c() * (int_pow(s.u, n) * s.v + (-1.0 + 1.0 / p.c()) * s.v);
    return w0 + p.eps() * g2;
}

inline std::array<double, 3> fast_eigenvalues(const ModelParams& p) {
    return {0.0, 0.0, -1.0 / p.sqrt_c()};
}

struct WaveSample {
    double xi;
    double U;
};

// Maps a computed orbit back to the physical traveling wave U(ξ); works on any
// trace whose samples expose .tau and .y[0] = u.
template <class Trace>
std::vector<WaveSample> reconstruct_wave(const ModelParams& p, const Trace& orbit) {
    const double amp = std::pow(p.c(), 1.0 / p.n());
    std::vector<WaveSample> out;
    out.reserve(orbit.samples.size());
    for (const auto& s : orbit.samples) out.push_back({s.tau / p.sqrt_c(), amp * s.y[0]});
    return out;
}

} // namespace mkdv
