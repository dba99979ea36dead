#include <doctest.h>

#include <cmath>

#include "hslab/constructions.hpp"
#include "hslab/corpus.hpp"
#include "hslab/geometry.hpp"

using namespace hslab;

TEST_CASE("bump values on the three branches") {
    // point at distance 0.2 with inner radius 0.25: on the plateau
    const auto p3 = corpus::grid(1, 3);
    const auto mid = bump(p3, 0, 0.25, 1.0);
    CHECK(mid.u[0] == doctest::Approx(1.0));
    // d = 0.5 sits on the ramp: (1 - 0.5) / 0.75
    CHECK(mid.u[1] == doctest::Approx((1.0 - 0.5) / 0.75));
    // d = R vanishes
    CHECK(mid.u[2] == doctest::Approx(0.0));
    CHECK(mid.g[0] == doctest::Approx(1.0 / 0.75));
    CHECK(mid.g[2] == 0.0);

    // midpoint of the ramp takes the value 1/2
    const auto g65 = corpus::grid(1, 65);
    const double r = 0.25, R = 0.75; // midpoint 0.5 is a grid point
    const auto ramp = bump(g65, 0, r, R);
    CHECK(ramp.u[32] == doctest::Approx(0.5));

    CHECK_THROWS_AS(bump(p3, 0, 1.0, 0.5), Error);
}

TEST_CASE("bump pairs pass the gradient inequality") {
    const auto c = corpus::cantor(4);
    for (double r : {0.0, 0.1, 0.3})
        for (double R : {0.2, 0.5, 0.9}) {
            if (!(r < R)) continue;
            const auto b = bump(c, 3, r, R);
            CHECK(is_generalized_gradient(c, b.u, b.g).ok);
            CHECK(measured_lipschitz(c, b.u) <= b.lipschitz * (1.0 + 1e-12));
        }
}

TEST_CASE("first-kind family radii and constants") {
    const auto g65 = corpus::grid(1, 65);
    const auto fam = construction1(g65, open_ball(32, 1.0));
    REQUIRE(fam.members.size() >= 3);
    CHECK(fam.members[0].r_out == doctest::Approx(0.75));
    CHECK(fam.members[0].r_in == doctest::Approx(0.625));
    CHECK(fam.members[0].lipschitz == doctest::Approx(8.0));
    CHECK(fam.members[2].r_out == doctest::Approx(0.5625));
    CHECK(fam.members[2].lipschitz == doctest::Approx(32.0));
    for (const auto& m : fam.members) {
        CHECK(m.r_out > 0.5);
        CHECK(m.r_out <= 0.75);
        CHECK(m.r_in < m.r_out);
    }
}

TEST_CASE("first-kind family on the three-point path") {
    const auto p3 = corpus::grid(1, 3);
    const auto fam = construction1(p3, open_ball(0, 1.0));
    // x1 sits inside the closed inner ball of every member (0.5 <= r_{j+1})
    for (const auto& m : fam.members) {
        CHECK(m.u[0] == doctest::Approx(1.0));
        CHECK(m.u[1] == doctest::Approx(1.0));
        CHECK(m.u[2] == doctest::Approx(0.0));
    }
}

TEST_CASE("families pass membership and the claimed Lipschitz bounds") {
    const auto c = corpus::cantor(5);
    const auto fam = construction1(c, open_ball(0, 0.5));
    for (const auto& m : fam.members) {
        CHECK(is_generalized_gradient(c, m.u, m.g).ok);
        CHECK(measured_lipschitz(c, m.u) <= m.lipschitz * (1.0 + 1e-12));
        for (double v : m.u) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
    CHECK(fam.stabilization_index >= 1);
    // point sets stabilize at the closed half-radius ball
    const int limit = c.ball_count(closed_ball(0, 0.25));
    CHECK(c.ball_count(open_ball(0, fam.members.back().r_out)) == limit);
}

TEST_CASE("second-kind family radii, gradients, and half-mass chain") {
    const auto g65 = corpus::grid(1, 65);
    const double lambda = 0.19;
    const Ball base = open_ball(32, 0.5);
    const double ph = geometry::phi(g65, 32, 0.5);
    REQUIRE(ph > 0.0);
    const auto fam = construction2(g65, base, lambda);
    CHECK(fam.phi_r == doctest::Approx(ph));
    REQUIRE(fam.members.size() >= 2);
    CHECK(fam.members[0].r_out == doctest::Approx(0.75 * ph));
    CHECK(fam.members[0].lipschitz == doctest::Approx(8.0 / ph));
    const double base_mass = g65.ball_mass(base);
    for (const auto& m : fam.members) {
        CHECK(is_generalized_gradient(g65, m.u, m.g).ok);
        CHECK(measured_lipschitz(g65, m.u) <= m.lipschitz * (1.0 + 1e-12));
        // mass chain: mu(inner) <= mu(B(x,phi)) <= mu(B)/2 and the
        // complement keeps at least half the mass
        CHECK(m.mass_inner <= g65.ball_mass(open_ball(32, ph)));
        CHECK(g65.ball_mass(open_ball(32, ph)) <= 0.5 * base_mass);
        CHECK(base_mass - m.mass_outer >= 0.5 * base_mass);
    }
}

TEST_CASE("second-kind family error paths") {
    const auto tp = MetricMeasureSpace("pair", {{0, 1}, {1, 0}}, {1, 1});
    try {
        construction2(tp, open_ball(0, 1.0), 0.19);
        FAIL("expected zero_phi");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::zero_phi);
    }
    const auto g65 = corpus::grid(1, 65);
    CHECK_THROWS_AS(construction2(g65, open_ball(0, 0.5), 0.3), Error); // lambda >= 1/5
}

TEST_CASE("half-mass verdict holds for every shift") {
    const auto g65 = corpus::grid(1, 65);
    const auto fam = construction2(g65, open_ball(32, 0.5), 0.19);
    for (const auto& m : fam.members)
        for (double gamma : {0.0, 0.5, 1.0, 10.0})
            CHECK(verify_halfmass(g65, fam, m.j, gamma));
}

TEST_CASE("closed-form second-kind values at half-mass scale 1/2") {
    // from the left endpoint of the unit grid: mu(B(0,1)) = 64/65 and the
    // open ball of radius 1/2 carries exactly half of it, so phi = 1/2
    const auto g65 = corpus::grid(1, 65);
    const auto fam = construction2(g65, open_ball(0, 1.0), 0.19);
    CHECK(fam.phi_r == doctest::Approx(0.5));
    CHECK(fam.members[0].r_out == doctest::Approx(0.375));
    CHECK(fam.members[0].r_in == doctest::Approx(0.3125));
    CHECK(fam.members[0].lipschitz == doctest::Approx(16.0));
}
