#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "mkdv/model.hpp"
#include "mkdv/numerics.hpp"
#include "mkdv/roots.hpp"

using namespace mkdv;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("find_root locates bracketed roots", "[numerics][roots]") {
    const double r = find_root([](double x) { return std::cos(x); }, 1.0, 2.0);
    CHECK_THAT(r, WithinAbs(kPi / 2.0, 1e-12));
    const double q = find_root([](double x) { return x * x * x - 2.0; }, 0.0, 2.0);
    CHECK_THAT(q, WithinRel(std::cbrt(2.0), 1e-12));
}

TEST_CASE("find_root accepts a root on the bracket edge", "[numerics][roots]") {
    CHECK(find_root([](double x) { return x; }, 0.0, 1.0) == 0.0);
    CHECK(find_root([](double x) { return x - 1.0; }, 0.0, 1.0) == 1.0);
}

TEST_CASE("find_root failure modes", "[numerics][roots]") {
    CHECK_THROWS_AS(find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0), NoSignChange);
    Tolerances tight;
    tight.root_tol = 1e-18;
    tight.max_iter = 2;
    CHECK_THROWS_AS(find_root([](double x) { return std::cos(x); }, 1.0, 2.0, tight),
                    MaxIterations);
}

TEST_CASE("orbit quadrature reproduces heteroclinic closed forms", "[numerics][quadrature]") {
    const ModelParams p(2, 1.0, 0.0);
    const double s = p.saddle_u();
    const TurningPoints tp{-s, s, p.d_n()};
    const double plain = quad_orbit(OrbitWeight::times_sqrt, [](double) { return 1.0; }, tp, p);
    CHECK_THAT(plain, WithinRel(2.0 * std::sqrt(2.0), 1e-9));
    const double second =
        quad_orbit(OrbitWeight::times_sqrt, [](double u) { return u * u; }, tp, p);
    CHECK_THAT(second, WithinRel(6.0 * std::sqrt(2.0) / 5.0, 1e-9));
}

TEST_CASE("orbit quadrature is stable under refinement", "[numerics][quadrature]") {
    const ModelParams p(3, 1.0, 0.0);
    const TurningPoints tp = turning_points(p, 0.2);
    auto f = [](double u) { return u * u * u; };
    Tolerances loose;
    loose.quad_rel_tol = 1e-8;
    Tolerances tight;
    tight.quad_rel_tol = 1e-13;
    const double a = quad_orbit(OrbitWeight::times_sqrt, f, tp, p, loose);
    const double b = quad_orbit(OrbitWeight::times_sqrt, f, tp, p, tight);
    CHECK_THAT(a, WithinRel(b, 1e-7));
}

TEST_CASE("orbit quadrature rejects invalid intervals", "[numerics][quadrature]") {
    const ModelParams p(2, 1.0, 0.0);
    const TurningPoints too_wide{-2.0, 2.0, 0.5};
    CHECK_THROWS_AS(
        quad_orbit(OrbitWeight::times_sqrt, [](double) { return 1.0; }, too_wide, p),
        NegativeRadicand);
    const TurningPoints empty{1.0, 1.0, 0.5};
    CHECK_THROWS_AS(quad_orbit(OrbitWeight::times_sqrt, [](double) { return 1.0; }, empty, p),
                    NegativeRadicand);
}

TEST_CASE("orbit quadrature reports non-convergence", "[numerics][quadrature]") {
    const ModelParams p(2, 1.0, 0.0);
    const TurningPoints tp = turning_points(p, 0.5);
    Tolerances tol;
    tol.quad_rel_tol = 1e-14;
    auto step = [](double u) { return u > 0.1 ? 1.0 : 0.0; };
    CHECK_THROWS_AS(quad_orbit(OrbitWeight::times_sqrt, step, tp, p, tol), NonConvergent);
}

namespace {

State<2> harmonic(const State<2>& y) { return {y[1], -y[0]}; }

} // namespace

TEST_CASE("ODE integrator tracks the harmonic oscillator", "[numerics][ode]") {
    const auto trace = integrate_ode<2>(harmonic, {1.0, 0.0}, 0.0, 2.0 * kPi);
    REQUIRE(!trace.samples.empty());
    const auto& last = trace.samples.back();
    CHECK_THAT(last.tau, WithinAbs(2.0 * kPi, 1e-12));
    CHECK_THAT(last.y[0], WithinAbs(1.0, 1e-8));
    CHECK_THAT(last.y[1], WithinAbs(0.0, 1e-8));
}

TEST_CASE("ODE events land on the analytic crossings", "[numerics][ode][events]") {
    std::vector<EventSpec<2>> events(1);
    events[0].fn = [](const State<2>& y) { return y[0]; };
    const auto trace = integrate_ode<2>(harmonic, {1.0, 0.0}, 0.0, 2.0 * kPi, events);
    REQUIRE(trace.events.size() == 2);
    CHECK_THAT(trace.events[0].tau, WithinAbs(kPi / 2.0, 1e-8));
    CHECK_THAT(trace.events[1].tau, WithinAbs(3.0 * kPi / 2.0, 1e-8));
}

TEST_CASE("ODE event direction filters select one crossing family", "[numerics][ode][events]") {
    std::vector<EventSpec<2>> up(1), down(1);
    up[0].fn = [](const State<2>& y) { return y[1]; };
    up[0].direction = +1;
    down[0].fn = up[0].fn;
    down[0].direction = -1;
    const auto rising = integrate_ode<2>(harmonic, {1.0, 0.0}, 0.0, 7.0, up);
    REQUIRE(rising.events.size() == 1);
    CHECK_THAT(rising.events[0].tau, WithinAbs(kPi, 1e-8));
    const auto falling = integrate_ode<2>(harmonic, {1.0, 0.0}, 0.0, 7.0, down);
    REQUIRE(falling.events.size() == 1);
    CHECK_THAT(falling.events[0].tau, WithinAbs(2.0 * kPi, 1e-8));
}

TEST_CASE("terminal events truncate the trace", "[numerics][ode][events]") {
    std::vector<EventSpec<2>> events(1);
    events[0].fn = [](const State<2>& y) { return y[0]; };
    events[0].direction = -1;
    events[0].terminal_count = 1;
    const auto trace = integrate_ode<2>(harmonic, {1.0, 0.0}, 0.0, 100.0, events);
    REQUIRE(trace.events.size() == 1);
    CHECK_THAT(trace.samples.back().tau, WithinAbs(kPi / 2.0, 1e-8));
}

TEST_CASE("backward integration mirrors the forward orbit", "[numerics][ode]") {
    const auto trace = integrate_ode<2>(harmonic, {1.0, 0.0}, 0.0, -2.0 * kPi);
    REQUIRE(trace.samples.size() >= 2);
    CHECK_THAT(trace.samples.front().tau, WithinAbs(-2.0 * kPi, 1e-12));
    CHECK(trace.samples.back().tau == 0.0);
    CHECK_THAT(trace.samples.front().y[0], WithinAbs(1.0, 1e-8));
    CHECK_THAT(trace.samples.front().y[1], WithinAbs(0.0, 1e-8));
    for (std::size_t i = 1; i < trace.samples.size(); ++i)
        CHECK(trace.samples[i].tau > trace.samples[i - 1].tau);
}

TEST_CASE("ODE integrator detects blow-up", "[numerics][ode]") {
    auto rhs = [](const State<1>& y) { return State<1>{y[0] * y[0]}; };
    CHECK_THROWS_AS(integrate_ode<1>(rhs, {1.0}, 0.0, 2.0), BlowUp);
}

TEST_CASE("ODE integrator reports step collapse at a singularity", "[numerics][ode]") {
    auto rhs = [](const State<1>& y) { return State<1>{-0.5 / y[0]}; };
    CHECK_THROWS_AS(integrate_ode<1>(rhs, {1.0}, 0.0, 2.0), StepUnderflow);
}

TEST_CASE("Richardson derivative", "[numerics]") {
    const double d = derivative([](double x) { return std::sin(x); }, 0.7, 0.1);
    CHECK_THAT(d, WithinAbs(std::cos(0.7), 1e-11));
}

TEST_CASE("parallel map covers every index once", "[numerics][parallel]") {
    std::vector<double> out(257, -1.0);
    parallel_for_indexed(out.size(), [&](std::size_t i) { out[i] = static_cast<double>(i * i); });
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<double>(i * i));
}

TEST_CASE("parallel map rethrows the first failure", "[numerics][parallel]") {
    CHECK_THROWS_AS(parallel_for_indexed(100,
                                         [](std::size_t i) {
                                             if (i == 10) throw NoSignChange("index 10");
                                             if (i == 50) throw BlowUp("index 50");
                                         }),
                    NoSignChange);
}
