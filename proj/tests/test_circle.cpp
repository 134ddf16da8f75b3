#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ringeq/circle.hpp"
#include "ringeq/dynamics.hpp"
#include "ringeq/newton.hpp"
#include "support.hpp"

using namespace ringeq;
using namespace ringeq::testing;

namespace {
PiecewiseForce symmetric_field(const Rational& F) {
    return PiecewiseForce::two_piece(Rational(1), Rational(1, 2), F, -F);
}
}  // namespace

TEST_CASE("symmetric construction at N = 8") {
    InteractionLaw law(2.0);
    auto build = construct_symmetric_detailed(
        SymmetricSpec{1.0, 0.2, 8, law, std::nullopt});
    const auto& config = build.config;
    REQUIRE(config.size() == 8);

    int first_arc = 0;
    for (double x : config.positions())
        if (x <= 0.5) ++first_arc;
    CHECK(first_arc == 4);

    // mirrored gaps agree to rounding (positions are walked, so the realized
    // gaps can differ from the shared pattern entries by an ulp)
    for (std::size_t k = 1; k <= 4; ++k)
        CHECK(std::abs(config.gap_after(k - 1) - config.gap_after(8 - k - 1)) <=
              1e-15);

    auto res = residual(config, symmetric_field(Rational(1, 5)), law);
    CHECK(res.relative_inf_norm() < 1e-10);

    // overlap equation and shift choice
    CHECK(std::abs(2 * build.overlap - build.half.first_gap() -
                   build.half.last_gap()) < 1e-12);
    CHECK(build.shift == doctest::Approx(0.5 * build.half.first_gap()));
    CHECK(build.shift > 0.0);
    CHECK(build.shift < build.half.first_gap());
    CHECK(build.shift < build.overlap);
    CHECK(build.overlap < build.half.last_gap() + build.shift);

    // the wrap gap is the largest
    double wrap = config.gap_after(7);
    for (std::size_t k = 0; k + 1 < 8; ++k) CHECK(wrap >= config.gap_after(k));

    // newton refinement does not move it
    auto refined = solve(config, symmetric_field(Rational(1, 5)), law);
    REQUIRE(refined.converged());
    for (std::size_t k = 0; k < 8; ++k)
        CHECK(std::abs(refined.config[k] - config[k]) < 1e-9);

    // relaxation oracle: the constructed point is a fixed point of the flow
    DynamicsParams params;
    params.max_time = 10.0;
    auto [relax_report, traj] = relax(config, symmetric_field(Rational(1, 5)), law,
                                      params);
    CHECK(relax_report.settled());
    CHECK(relax_report.steps == 0);
}

TEST_CASE("odd counts are rejected by parity") {
    InteractionLaw law(2.0);
    CHECK_THROWS_AS(
        construct_symmetric(SymmetricSpec{1.0, 0.2, 7, law, std::nullopt}),
        ParityError);
}

TEST_CASE("target point is contained bit-exactly") {
    InteractionLaw law(2.0);
    auto config =
        construct_symmetric(SymmetricSpec{1.0, 0.2, 8, law, 0.37});
    bool found = false;
    for (double x : config.positions()) found = found || x == 0.37;
    CHECK(found);
    auto res = residual(config, symmetric_field(Rational(1, 5)), law);
    CHECK(res.relative_inf_norm() < 1e-10);

    // rerunning reproduces the same configuration
    auto again = construct_symmetric(SymmetricSpec{1.0, 0.2, 8, law, 0.37});
    for (std::size_t k = 0; k < config.size(); ++k)
        CHECK(std::abs(again[k] - config[k]) < 1e-12);
}

TEST_CASE("gap content is invariant under the target shift") {
    InteractionLaw law(2.0);
    auto base = construct_symmetric_detailed(
        SymmetricSpec{1.0, 0.2, 8, law, std::nullopt});
    auto shifted =
        construct_symmetric(SymmetricSpec{1.0, 0.2, 8, law, 0.37});
    CHECK(best_rotation_distance(to_gaps(base.config).gaps,
                                 to_gaps(shifted).gaps) < 1e-12);
}

TEST_CASE("points in the window sliver are reported infeasible") {
    InteractionLaw law(2.0);
    auto build = construct_symmetric_detailed(
        SymmetricSpec{1.0, 0.2, 8, law, std::nullopt});
    // the wrap gap is wider than the window, so points slightly past the
    // window edge of the last particle are unreachable by the whole family
    double wrap = build.config.gap_after(7);
    double offset = 0.5 * (0.5 * build.window + 0.5 * wrap);  // past the edge
    double probe = build.config.positions().back() + offset;
    if (probe > 1.0) probe -= 1.0;
    double expected_margin = offset - 0.5 * build.window;
    REQUIRE(expected_margin > 0.0);
    try {
        construct_symmetric(SymmetricSpec{1.0, 0.2, 8, law, probe});
        FAIL("expected InfeasibleTarget");
    } catch (const InfeasibleTarget& err) {
        CHECK(err.margin == doctest::Approx(expected_margin).epsilon(1e-6));
    }
}

TEST_CASE("gap pattern grows with the overlap") {
    InteractionLaw law(2.0);
    SegmentProblem base{0.5 + 0.01, 6, 0.2, law};
    auto lo = solve_exact(base);
    SegmentProblem wider{0.5 + 0.02, 6, 0.2, law};
    auto hi = solve_exact(wider);
    for (std::size_t k = 0; k < lo.gaps.size(); ++k)
        CHECK(hi.gaps[k] > lo.gaps[k]);
}

TEST_CASE("blocks of a constructed equilibrium satisfy the segment rows") {
    InteractionLaw law(2.0);
    auto config = construct_symmetric(SymmetricSpec{1.0, 0.3, 12, law, std::nullopt});
    auto field = symmetric_field(Rational(3, 10));
    auto res = residual(config, field, law);
    // every interior row of every contiguous block is a residual row of the
    // circle; the uniform bound covers them all
    CHECK(res.relative_inf_norm() < 1e-10);
}

TEST_CASE("glue probe: symmetric control matches the constructor") {
    InteractionLaw law(2.0);
    GlueInputs in{Rational(1, 2), Rational(1, 2), Rational(1), Rational(-1), 6, 6,
                  law};
    auto rep = glue_probe(in);
    CHECK(rep.infeasibility_rel < 1e-10);
    CHECK(rep.gamma == 1.0);
    CHECK(std::abs(rep.m_A) < 1e-12);
    CHECK(std::abs(rep.m_B) < 1e-12);

    auto build = construct_symmetric_detailed(
        SymmetricSpec{1.0, 1.0, 12, law, std::nullopt});
    CHECK(rep.m1 + rep.m2 == doctest::Approx(2 * build.overlap).epsilon(1e-9));
}

TEST_CASE("glue probe preconditions") {
    InteractionLaw law(2.0);
    CHECK_THROWS_AS(glue_probe(GlueInputs{Rational(1, 2), Rational(1, 2),
                                          Rational(1), Rational(-2), 6, 6, law}),
                    GluePreconditionError);
    CHECK_THROWS_AS(glue_probe(GlueInputs{Rational(1, 3), Rational(2, 3),
                                          Rational(1), Rational(-2), 8, 4, law}),
                    GluePreconditionError);
}

TEST_CASE("commensurate asymmetric inputs glue exactly") {
    // the two matching equations are equivalent under the partition identity
    // (telescoped balance), so the constrained least squares reaches an exact
    // root and the single-equation roots coincide
    InteractionLaw law(2.0);
    GlueInputs in{Rational(2, 3), Rational(1, 3), Rational(1), Rational(-2), 16, 8,
                  law};
    auto rep = glue_probe(in);
    CHECK(rep.infeasibility_rel < 1e-10);
    CHECK(rep.m1 > 0.0);
    CHECK(rep.m2 > 0.0);
    CHECK(rep.m_A == doctest::Approx(rep.m_B).epsilon(1e-6));

    // cross-check with the independent ladder oracle
    auto ladder = ladder_equilibrium(1.0, 2.0 / 3.0, 1.0, -2.0, 16, 8, law);
    CHECK(ladder.exists);
    REQUIRE(ladder.config.has_value());
    auto field = PiecewiseForce::two_piece(Rational(1), Rational(2, 3), Rational(1),
                                           Rational(-2));
    CHECK(residual(*ladder.config, field, law).relative_inf_norm() < 1e-10);
}

TEST_CASE("gap-point repair balances the pinned particles") {
    InteractionLaw law(2.0);

    // symmetric instance: both overrides coincide by mirror symmetry
    auto sym = repair_gap_points(Rational(1), Rational(1, 2), Rational(1),
                                 Rational(-1), 5, 5, law);
    CHECK(sym.override_at_split ==
          doctest::Approx(sym.override_at_origin).epsilon(1e-10));
    CHECK(sym.residual.relative_inf_norm() < 1e-10);

    // asymmetric instance from the repair example family
    auto rep = repair_gap_points(Rational(1), Rational(3, 5), Rational(1),
                                 Rational(-3, 2), 6, 4, law);
    CHECK(rep.residual.relative_inf_norm() < 1e-10);
    bool at_split = false, at_origin = false;
    for (double x : rep.config.positions()) {
        at_split = at_split || x == rep.field.breakpoint_at(0);
        at_origin = at_origin || x == rep.field.breakpoint_at(1);
    }
    CHECK(at_split);
    CHECK(at_origin);

    // removing the overrides exposes the imbalance at the pinned particles
    auto bare = residual(rep.config, rep.field.without_overrides(), law);
    CHECK(bare.inf_norm > 1e-3 * bare.force_scale);

    CHECK_THROWS_AS(repair_gap_points(Rational(1), Rational(1, 2), Rational(1),
                                      Rational(-1), 2, 5, law),
                    std::invalid_argument);
}
