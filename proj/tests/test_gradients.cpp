#include <doctest.h>

#include <cmath>
#include <random>

#include "hslab/corpus.hpp"
#include "hslab/gradients.hpp"

using namespace hslab;

namespace {

MetricMeasureSpace two_point() {
    return MetricMeasureSpace("pair", {{0, 1}, {1, 0}}, {1, 1});
}

std::vector<double> random_u(int n, unsigned seed) {
    std::mt19937_64 gen(seed);
    std::vector<double> u(n);
    for (auto& v : u) v = static_cast<double>(gen() >> 11) * 0x1.0p-53 * 4.0 - 2.0;
    return u;
}

} // namespace

TEST_CASE("lp norms") {
    const auto tp = two_point();
    CHECK(lp_norm(tp, {1, 1}, 2.0) == doctest::Approx(std::sqrt(2.0)));
    CHECK(lp_norm(tp, {3, 4}, 1.0) == doctest::Approx(7.0));
    const auto half = MetricMeasureSpace("half", {{0, 1}, {1, 0}}, {0.5, 0.5});
    CHECK(lp_norm(half, {0, 1}, 1.0) == doctest::Approx(0.5));
}

TEST_CASE("gradient membership check") {
    const auto tp = two_point();
    const auto ok = is_generalized_gradient(tp, {0, 1}, {0.5, 0.5});
    CHECK(ok.ok);
    CHECK(ok.slack == doctest::Approx(0.0));
    const auto bad = is_generalized_gradient(tp, {0, 1}, {0.4, 0.4});
    CHECK_FALSE(bad.ok);
    CHECK(bad.i == 0);
    CHECK(bad.j == 1);
    CHECK(is_generalized_gradient(tp, {3, 3}, {0, 0}).ok);
}

TEST_CASE("minimal gradient, analytic instances") {
    const auto tp = two_point();
    const auto constant = minimal_gradient(tp, {5, 5}, 1.0);
    CHECK(constant.value == doctest::Approx(0.0));

    const auto unit = minimal_gradient(tp, {0, 1}, 1.0);
    CHECK(unit.value == doctest::Approx(1.0));
    CHECK(unit.method == SolveMethod::exact_lp);
    CHECK(unit.certified);

    const auto p3 = corpus::grid(1, 3);
    const auto step = minimal_gradient(p3, {0, 0, 1}, 1.0);
    CHECK(step.value == doctest::Approx(2.0 / 3.0));
    const auto enumerated = minimal_gradient_by_enumeration(p3, {0, 0, 1}, 1.0, {0, 1, 2});
    CHECK(enumerated.value == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("solver output is always feasible with tight slack") {
    for (unsigned seed = 0; seed < 20; ++seed) {
        const auto s = corpus::random_space(6, seed);
        const auto u = random_u(6, seed + 100);
        for (double p : {0.5, 1.0, 2.0}) {
            const auto rep = minimal_gradient(s, u, p);
            const auto chk = is_generalized_gradient(s, u, rep.g);
            CHECK(chk.slack >= -1e-10);
            CHECK(rep.value == doctest::Approx(lp_norm(s, rep.g, p)).epsilon(1e-10));
        }
    }
}

TEST_CASE("LP value equals exhaustive vertex enumeration on small spaces") {
    for (unsigned seed = 0; seed < 100; ++seed) {
        const int n = 4 + static_cast<int>(seed % 2);
        const auto s = corpus::random_space(n, seed);
        const auto u = random_u(n, seed + 1);
        PointSet domain(n);
        for (int i = 0; i < n; ++i) domain[i] = i;
        const auto lp = minimal_gradient(s, u, 1.0);
        const auto ve = minimal_gradient_by_enumeration(s, u, 1.0, domain);
        CHECK(lp.value == doctest::Approx(ve.value).epsilon(1e-7));
    }
}

TEST_CASE("convex solver at p = 2 is certified and matches enumeration-refined optima") {
    for (unsigned seed = 0; seed < 10; ++seed) {
        const auto s = corpus::random_space(5, seed);
        const auto u = random_u(5, seed + 40);
        const auto rep = minimal_gradient(s, u, 2.0);
        CHECK(rep.method == SolveMethod::convex_descent);
        CHECK(rep.certified);
        CHECK(rep.kkt_residual <= 1e-8);
        CHECK(rep.feasibility_violation <= 1e-8);
        // weak duality sandwich pins the optimum
        CHECK(rep.duality_gap <= 1e-8 * std::max(1.0, std::pow(rep.value, 2.0)));
    }
}

TEST_CASE("homogeneity of exact methods") {
    const auto s = corpus::random_space(5, 77);
    const auto u = random_u(5, 78);
    std::vector<double> u3(u);
    for (auto& v : u3) v *= -3.0;
    for (double p : {0.5, 1.0, 2.0}) {
        const double base = minimal_gradient(s, u, p).value;
        const double scaled = minimal_gradient(s, u3, p).value;
        CHECK(scaled == doctest::Approx(3.0 * base).epsilon(1e-6));
    }
}

TEST_CASE("sum of gradients is a gradient of the sum") {
    const auto s = corpus::random_space(6, 5);
    const auto u = random_u(6, 6);
    const auto v = random_u(6, 7);
    const auto gu = minimal_gradient(s, u, 1.0).g;
    const auto gv = minimal_gradient(s, v, 1.0).g;
    std::vector<double> w(6), gw(6);
    for (int i = 0; i < 6; ++i) {
        w[i] = u[i] + v[i];
        gw[i] = gu[i] + gv[i];
    }
    CHECK(is_generalized_gradient(s, w, gw).ok);
}

TEST_CASE("sub-unit exponents: enumeration on small domains, heuristic above") {
    const auto s = corpus::random_space(6, 9);
    const auto u = random_u(6, 10);
    const auto small = minimal_gradient(s, u, 0.5);
    CHECK(small.method == SolveMethod::vertex_enumeration);
    CHECK(small.certified);
    CHECK(small.enumerated > 0);

    const auto big_space = corpus::random_space(12, 9);
    const auto big = minimal_gradient(big_space, random_u(12, 11), 0.5);
    CHECK(big.method == SolveMethod::heuristic);
    CHECK_FALSE(big.certified);
    CHECK(is_generalized_gradient(big_space, random_u(12, 11), big.g).slack >= -1e-10);
}

TEST_CASE("degenerate domain is rejected") {
    const auto s = corpus::grid(1, 3);
    CHECK_THROWS_AS(minimal_gradient(s, {0, 0, 1}, 1.0, PointSet{1}), Error);
}

TEST_CASE("m norm") {
    const auto tp = two_point();
    CHECK(m_norm(tp, {2, 2}, 1.0) == doctest::Approx(4.0));
    CHECK(m_norm(tp, {0, 1}, 1.0) == doctest::Approx(2.0));
    CHECK(m_norm(tp, {0, 0}, 1.0) == doctest::Approx(0.0));
}

TEST_CASE("ball mean") {
    const auto tp = two_point();
    CHECK(ball_mean(tp, {0, 1}, {0, 1}) == doctest::Approx(0.5));
    const auto p3 = corpus::grid(1, 3);
    CHECK(ball_mean(p3, {0, 0, 1}, {0, 1, 2}) == doctest::Approx(1.0 / 3.0));
    CHECK(ball_mean(p3, {7, 7, 7}, {0, 1, 2}) == doctest::Approx(7.0));
    CHECK_THROWS_AS(ball_mean(p3, {0, 0, 1}, {}), Error);
}

TEST_CASE("best constant shift") {
    const auto p3 = corpus::grid(1, 3);
    const PointSet all{0, 1, 2};

    const auto med = best_constant_shift(p3, {0, 0, 1}, 1.0, all);
    CHECK(med.gamma == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(med.value == doctest::Approx(1.0 / 3.0));

    const auto mean = best_constant_shift(p3, {0, 0, 1}, 2.0, all);
    CHECK(mean.gamma == doctest::Approx(1.0 / 3.0).epsilon(1e-7));
    CHECK(mean.value == doctest::Approx(std::sqrt(2.0) / 3.0));

    const auto constant = best_constant_shift(p3, {4, 4, 4}, 2.0, all);
    CHECK(constant.gamma == doctest::Approx(4.0));
    CHECK(constant.value == doctest::Approx(0.0));

    const auto sub_unit = best_constant_shift(p3, {0, 0.2, 1}, 0.5, all);
    CHECK_FALSE(sub_unit.certified);
    // minimizer of a per-interval concave objective sits at a data value
    CHECK((sub_unit.gamma == doctest::Approx(0.0) || sub_unit.gamma == doctest::Approx(0.2) ||
           sub_unit.gamma == doctest::Approx(1.0)));
}

TEST_CASE("shift against the mean, doubled-infimum comparison") {
    const auto s = corpus::random_space(9, 21);
    const auto u = random_u(9, 22);
    PointSet all(9);
    for (int i = 0; i < 9; ++i) all[i] = i;
    for (double q : {1.0, 1.5, 2.0, 3.0}) {
        const auto shift = best_constant_shift(s, u, q, all);
        const double mu = ball_mean(s, u, all);
        double at_mean = 0.0, total = 0.0;
        for (int i = 0; i < 9; ++i) {
            at_mean += s.weight(i) * std::pow(std::abs(u[i] - mu), q);
            total += s.weight(i);
        }
        at_mean = std::pow(at_mean / total, 1.0 / q);
        CHECK(shift.value <= at_mean * (1.0 + 1e-9));
        if (q == 2.0) CHECK(shift.value == doctest::Approx(at_mean));
        // oscillation around the mean is at most twice the infimum
        CHECK(at_mean <= 2.0 * shift.value * (1.0 + 1e-9));
    }
}
