#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "mkdv/abelian.hpp"
#include "mkdv/dynamics.hpp"
#include "mkdv/model.hpp"

using namespace mkdv;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("level orbit closes with the quadrature period", "[dynamics][orbit]") {
    const ModelParams p(2, 1.0, 0.0);
    const double h = 0.3;
    const auto trace = orbit_on_level(p, h);
    REQUIRE(trace.events.size() == 2);
    CHECK_THAT(trace.events[1].tau, WithinRel(6.89871727200873111, 1e-8));

    const TurningPoints tp = turning_points(p, h);
    CHECK_THAT(trace.samples.front().y[0], WithinAbs(tp.u_plus, 1e-12));
    CHECK_THAT(trace.samples.back().y[0], WithinAbs(tp.u_plus, 1e-6));
    CHECK_THAT(trace.samples.back().y[1], WithinAbs(0.0, 1e-6));
    CHECK_THAT(trace.events[0].y[0], WithinAbs(tp.u_minus, 1e-6));

    double h_drift = 0.0;
    for (const auto& s : trace.samples)
        h_drift = std::fmax(h_drift, std::fabs(hamiltonian(p, {s.y[0], s.y[1]}) - h));
    CHECK(h_drift <= 1e-8);

    const auto t1 = orbit_on_level(ModelParams(1, 1.0, 0.0), 1.0 / 3.0);
    REQUIRE(t1.events.size() == 2);
    CHECK_THAT(t1.events[1].tau, WithinRel(6.90164361533925598, 1e-8));

    CHECK_THROWS_AS(orbit_on_level(ModelParams(2, 1.0, 0.01), h), DomainViolation);
}

TEST_CASE("time integrals satisfy the energy-rate identity", "[dynamics][integrals]") {
    const ModelParams p(2, 1.0, 0.0);
    const TimeIntegrals ti = time_integrals(p, 0.3);
    CHECK_THAT(ti.int_v2, WithinRel(1.96879137276565879, 1e-9));
    CHECK_THAT(ti.int_unv2, WithinRel(0.327323644738534938, 1e-9));
    CHECK_THAT(ti.period, WithinRel(6.89871727200873111, 1e-9));
    CHECK_THAT(ti.int_upp2, WithinRel(ti.int_v2 - ti.int_unv2, 1e-8));

    for (int n = 1; n <= 6; ++n) {
        const ModelParams q(n, 1.0, 0.0);
        for (double f : {0.2, 0.5, 0.8}) {
            const TimeIntegrals t = time_integrals(q, f * q.d_n());
            CHECK(std::fabs(t.int_upp2 - (t.int_v2 - t.int_unv2)) <= 1e-8 * t.int_v2);
        }
    }
}

TEST_CASE("time integrals agree with quadratures along the flow", "[dynamics][integrals]") {
    const ModelParams p(2, 1.0, 0.0);
    const double h = 0.3;
    const TimeIntegrals ti = time_integrals(p, h);
    const double u0 = turning_points(p, h).u_plus;
    auto aug = [&](const State<4>& y) -> State<4> {
        const double wp = potential(p, y[0]).w_prime;
        return {y[1], -wp, y[1] * y[1], wp * wp};
    };
    const auto trace = integrate_ode<4>(aug, {u0, 0.0, 0.0, 0.0}, 0.0, ti.period);
    const auto& last = trace.samples.back();
    CHECK_THAT(last.y[2], WithinRel(ti.int_v2, 1e-6));
    CHECK_THAT(last.y[3], WithinRel(ti.int_upp2, 1e-6));
}

TEST_CASE("scaled return-map function equals the averaged integral", "[dynamics]") {
    for (int n : {1, 2, 3}) {
        const ModelParams p(n, 1.0, 0.0);
        for (double f : {0.2, 0.6}) {
            const double h = f * p.d_n();
            for (double c : {0.7, 1.0, 1.8}) {
                CHECK_THAT(psi_hat(p, h, c), WithinAbs(abelian_integral(p, h, c), 1e-8));
            }
        }
    }
    CHECK_THROWS_AS(psi_hat(ModelParams(2, 1.0, 0.0), 0.3, 0.0), NonPositiveSpeed);
}

TEST_CASE("scaled return-map function is increasing in c", "[dynamics]") {
    const ModelParams p(2, 1.0, 0.0);
    const double h = 0.4;
    double prev = psi_hat(p, h, 0.5);
    for (double c : {0.8, 1.1, 1.5, 2.0, 3.0}) {
        const double cur = psi_hat(p, h, c);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("energy-balance speed matches the moment-ratio speed", "[dynamics][routes]") {
    for (int n = 1; n <= 4; ++n) {
        const ModelParams p(n, 1.0, 0.0);
        for (double f : {0.15, 0.35, 0.55, 0.75, 0.92}) {
            const double h = f * p.d_n();
            const double ca = limit_speed(p, h);
            const double cb = c0_from_energy_balance(p, h);
            CHECK(std::fabs(ca - cb) <= 1e-8 * ca);
        }
    }
}

TEST_CASE("return map conserves energy when eps=0", "[dynamics][return-map]") {
    const ModelParams p(2, 1.3, 0.0);
    const ReturnMapResult r = return_map_psi(p, 1.1);
    CHECK(r.tau1 > 0.0);
    CHECK(r.tau2 < 0.0);
    CHECK(r.u_at_tau1 < 0.0);
    CHECK(r.u_at_tau2 < 0.0);
    CHECK_THAT(r.psi, WithinAbs(0.0, 1e-9));
    CHECK_THROWS_AS(return_map_psi(p, 0.0), DomainViolation);
    CHECK_THROWS_AS(return_map_psi(p, p.saddle_u()), DomainViolation);
}

TEST_CASE("return map energy defect changes sign across the limit speed", "[dynamics][return-map]") {
    const int n = 2;
    const double h = 0.3;
    const double c0 = limit_speed(ModelParams(n, 1.0, 0.0), h);
    const double u0 = turning_points(ModelParams(n, 1.0, 0.0), h).u_plus;
    const double lo = return_map_psi(ModelParams(n, 0.8 * c0, 0.01), u0).psi;
    const double hi = return_map_psi(ModelParams(n, 1.2 * c0, 0.01), u0).psi;
    CHECK(lo * hi < 0.0);
}

TEST_CASE("shooting speed reduces to the averaged speed at eps=0", "[dynamics][shooting]") {
    const ModelParams p(2, 1.0, 0.0);
    CHECK(solve_wave_speed(p, 0.3, 0.0) == limit_speed(p, 0.3));
    CHECK_THROWS_AS(solve_wave_speed(p, 0.0, 0.01), EnergyOutOfRange);
    CHECK_THROWS_AS(solve_wave_speed(p, p.d_n(), 0.01), EnergyOutOfRange);
    CHECK_THROWS_AS(solve_wave_speed(p, 0.3, -0.01), NegativeEps);
    CHECK_THROWS_AS(solve_wave_speed(p, 0.3, 0.2), DomainViolation);
}

TEST_CASE("shooting speed converges quadratically in eps", "[dynamics][shooting]") {
    const ModelParams p(2, 1.0, 0.0);
    const double h = 0.3;
    const double c0 = limit_speed(p, h);
    const std::vector<double> eps = {0.04, 0.02, 0.01};
    const std::vector<double> expected = {1.386125e-07, 3.430484e-08, 8.576352e-09};
    std::vector<double> err;
    for (double e : eps) err.push_back(std::fabs(solve_wave_speed(p, h, e) - c0));
    for (std::size_t i = 0; i < err.size(); ++i)
        CHECK_THAT(err[i], WithinRel(expected[i], 0.1));
    for (std::size_t i = 1; i < err.size(); ++i) {
        const double ratio = err[i - 1] / err[i];
        CHECK(ratio > 3.5);
        CHECK(ratio < 4.5);
    }
}

TEST_CASE("limit cycle lands on the predicted energy level", "[dynamics][cycle]") {
    const ModelParams p(2, 2.0, 0.01);
    const LimitCycleResult lc = find_limit_cycle(p);
    CHECK_THAT(lc.predicted_h, WithinAbs(0.696196996852099712, 1e-9));
    CHECK(std::fabs(lc.h_star - lc.predicted_h) <= 1e-5);
    CHECK_THAT(lc.u0_star, WithinAbs(1.4820541736225459, 1e-6));
    REQUIRE(lc.cycle.events.size() >= 2);
    CHECK_THAT(lc.cycle.samples.front().y[0], WithinAbs(lc.u0_star, 1e-12));

    CHECK_THROWS_AS(find_limit_cycle(ModelParams(2, 1.0, 0.01)), NoCycle);
    CHECK_THROWS_AS(find_limit_cycle(ModelParams(2, 10.0, 0.01)), NoCycle);
    CHECK_THROWS_AS(find_limit_cycle(ModelParams(2, 2.0, 0.0)), DomainViolation);
}

TEST_CASE("limit cycle tracks the prediction across eps", "[dynamics][cycle]") {
    for (double e : {0.04, 0.02, 0.01}) {
        const LimitCycleResult lc = find_limit_cycle(ModelParams(2, 2.0, e));
        CHECK(std::fabs(lc.h_star - lc.predicted_h) <= 1e-4);
    }
}

TEST_CASE("slow-manifold residual scales as eps squared", "[dynamics][manifold]") {
    const double h = 0.3;
    const ModelParams base(2, 1.0, 0.0);
    const double u0 = turning_points(base, h).u_plus;
    const double span = 3.0 * time_integrals(base, h).period;
    auto residual = [&](double e) {
        const ModelParams p = base.with_eps(e);
        const PhaseState3 init{u0, 0.0, slow_manifold_w(p, {u0, 0.0})};
        return manifold_residual(p, init, 0.0, span);
    };
    const double ratio = residual(0.02) / residual(0.01);
    CHECK(ratio > 3.0);
    CHECK(ratio < 6.0);
}

TEST_CASE("off-manifold transient collapses onto the graph", "[dynamics][manifold]") {
    const ModelParams p(2, 1.0, 0.01);
    const PhaseState3 init{1.0, 0.0, slow_manifold_w(p, {1.0, 0.0}) + 0.5};
    const double res = manifold_residual(p, init, 0.0, 5.0);
    CHECK(res <= 0.02);

    CHECK_THROWS_AS(manifold_residual(ModelParams(2, 1.0, 0.0), init, 0.0, 5.0),
                    SingularFastField);
    CHECK_THROWS_AS(manifold_residual(p, init, 1.0, 1.0), DomainViolation);
    CHECK_THROWS_AS(manifold_residual(p, init, 1.0, 0.5), DomainViolation);
}
