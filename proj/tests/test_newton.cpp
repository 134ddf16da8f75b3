#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ringeq/circle.hpp"
#include "ringeq/newton.hpp"
#include "support.hpp"

using namespace ringeq;
using namespace ringeq::testing;

TEST_CASE("already at a root: zero iterations") {
    InteractionLaw law(2.0);
    auto field = PiecewiseForce::uniform(Rational(1), Rational(0));
    auto report = solve(equidistant(1.0, 8), field, law);
    CHECK(report.converged());
    CHECK(report.iterations == 0);
    CHECK(report.residual_norm == 0.0);
}

TEST_CASE("jacobian matches finite differences") {
    InteractionLaw law(2.2);
    std::mt19937_64 rng(13);
    auto field = PiecewiseForce::uniform(Rational(1), Rational(0));
    for (int trial = 0; trial < 10; ++trial) {
        auto config = random_configuration(rng, 1.0, 8, 0.4);
        auto rows = detail::residual_jacobian(config, law);
        const double h = 1e-7;
        const std::size_t n = config.size();
        for (std::size_t j = 0; j < n; ++j) {
            auto plus = config.positions(), minus = config.positions();
            plus[j] += h;
            minus[j] -= h;
            auto rp = residual(Configuration(config.geometry(), plus), field, law);
            auto rm = residual(Configuration(config.geometry(), minus), field, law);
            for (std::size_t k = 0; k < n; ++k) {
                double fd = (rp.values[k] - rm.values[k]) / (2 * h);
                double analytic = 0.0;
                if (k == j)
                    analytic = rows[k].self;
                else if ((j + 1) % n == k)
                    analytic = rows[k].prev;
                else if ((k + 1) % n == j)
                    analytic = rows[k].next;
                CHECK(fd == doctest::Approx(analytic)
                                .epsilon(1e-6)
                                .scale(std::abs(rows[k].self) + 1.0));
            }
        }
    }
}

TEST_CASE("refines a perturbed symmetric equilibrium back") {
    InteractionLaw law(2.0);
    auto built = construct_symmetric(SymmetricSpec{1.0, 0.2, 8, law, std::nullopt});
    auto field = PiecewiseForce::two_piece(Rational(1), Rational(1, 2),
                                           Rational(1, 5), Rational(-1, 5));

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> noise(-0.1 / 8.0, 0.1 / 8.0);
    auto xs = built.positions();
    for (auto& x : xs) x += noise(rng);
    std::sort(xs.begin(), xs.end());
    auto report = solve(Configuration(built.geometry(), xs), field, law);
    REQUIRE(report.converged());

    auto got = to_gaps(report.config).gaps;
    auto want = to_gaps(built).gaps;
    CHECK(best_rotation_distance(got, want) < 1e-9);
}

TEST_CASE("gauge choice does not change the equilibrium") {
    InteractionLaw law(2.0);
    auto field = PiecewiseForce::uniform(Rational(1), Rational(0));
    std::mt19937_64 rng(23);
    auto init = random_configuration(rng, 1.0, 10, 0.4);
    NewtonOptions pin0;
    NewtonOptions pin1;
    pin1.pin_index = 1;
    auto a = solve(init, field, law, pin0);
    auto b = solve(init, field, law, pin1);
    REQUIRE(a.converged());
    REQUIRE(b.converged());
    CHECK(best_rotation_distance(to_gaps(a.config).gaps, to_gaps(b.config).gaps) <
          1e-10);
}

TEST_CASE("late residuals drop fast") {
    InteractionLaw law(2.0);
    auto field = PiecewiseForce::uniform(Rational(1), Rational(0));
    std::mt19937_64 rng(29);
    auto init = random_configuration(rng, 1.0, 12, 0.3);
    auto report = solve(init, field, law);
    REQUIRE(report.converged());
    const auto& hist = report.residual_history;
    REQUIRE(hist.size() >= 3);
    // quadratic tail: at least a tenfold drop on the final step
    double last = hist[hist.size() - 1];
    double prev = hist[hist.size() - 2];
    if (prev > 1e-300) CHECK(last <= 0.1 * prev);
}

TEST_CASE("multi-start uniqueness under zero force") {
    InteractionLaw law(3.0);
    auto field = PiecewiseForce::uniform(Rational(1), Rational(0));
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        auto init = random_configuration(rng, 1.0, 9, 0.25);
        auto report = solve(init, field, law);
        REQUIRE(report.converged());
        for (std::size_t k = 0; k < report.config.size(); ++k)
            CHECK(std::abs(report.config.gap_after(k) - 1.0 / 9.0) < 1e-10);
    }
}

TEST_CASE("unsustainable partition ends in a crossing or stall") {
    // M = 1/2 with forces (1, -3) admits the partition (3, 1) but the arc
    // span of three ladder particles exceeds the arc length
    InteractionLaw law(2.0);
    auto field = PiecewiseForce::two_piece(Rational(1), Rational(1, 2),
                                           Rational(1), Rational(-3));
    std::mt19937_64 rng(37);
    int converged_inside = 0;
    for (int trial = 0; trial < 20; ++trial) {
        auto init = random_partitioned(rng, 1.0, 0.5, 3, 1);
        auto report = solve(init, field, law);
        if (report.converged()) {
            auto counts = force_sum(report.config, field).counts;
            bool interior = true;
            for (double x : report.config.positions())
                if (x == 0.5 || x == 1.0) interior = false;
            if (interior && counts[0] == 3 && counts[1] == 1) ++converged_inside;
        } else {
            CHECK((report.status == NewtonStatus::CrossedBreakpoint ||
                   report.status == NewtonStatus::Stalled ||
                   report.status == NewtonStatus::MaxIterations));
        }
    }
    CHECK(converged_inside == 0);
}
