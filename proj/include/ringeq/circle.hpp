// Equilibria on the circle assembled from segment solutions: the symmetric
// two-arc constructor (mirror gluing), the asymmetric glue probe with its
// matching-equation diagnostics, and the gap-point repair that balances
// particles pinned at the force breakpoints by overriding the force there.
#ifndef RINGEQ_CIRCLE_HPP
#define RINGEQ_CIRCLE_HPP

#include <optional>
#include <stdexcept>

#include "ringeq/model.hpp"
#include "ringeq/rational.hpp"
#include "ringeq/segment.hpp"

namespace ringeq {

// Odd particle count on the symmetric field: no equilibrium exists.
struct ParityError : std::domain_error {
    using std::domain_error::domain_error;
};

// Requested target point is not attainable by any member of the equilibrium
// family: each particle only sweeps an arc as wide as the smallest gap while
// the occupancy inequalities hold.
struct InfeasibleTarget : std::domain_error {
    InfeasibleTarget(const std::string& what, double margin_)
        : std::domain_error(what), margin(margin_) {}
    double margin;  // distance beyond the attainable window, in length units
};

// A named exact-arithmetic precondition failed.
struct GluePreconditionError : std::domain_error {
    GluePreconditionError(const std::string& condition_, const std::string& what)
        : std::domain_error(what), condition(condition_) {}
    std::string condition;
};

struct SymmetricSpec {
    double circumference = 1.0;
    double force = 1.0;  // field is +F on (0, L/2], -F on (L/2, L]
    long long count = 8;
    InteractionLaw law{2.0};
    std::optional<double> target;  // point some particle must land on exactly
};

struct SymmetricBuild {
    Configuration config;
    double overlap = 0.0;  // m: solved overlap extension, 2m = gap_1 + gap_last
    double shift = 0.0;    // b: distance of the last particle below L
    SegmentSolution half;  // segment on [0, L/2 + m] with N/2 + 2 points
    // the target window: each particle covers an arc of this width as the
    // family slides within the occupancy inequalities
    double window = 0.0;
    ResidualVector residual;
};

// Builds the mirror-symmetric equilibrium; throws ParityError for odd counts
// and InfeasibleTarget when the requested point is outside every particle's
// window.
SymmetricBuild construct_symmetric_detailed(const SymmetricSpec& spec);
Configuration construct_symmetric(const SymmetricSpec& spec);

struct GlueInputs {
    Rational M1{1, 2}, M2{1, 2};  // arc lengths, L = M1 + M2
    Rational F1{1}, F2{-1};       // F1 > 0 > F2
    long long N1 = 4, N2 = 4;
    InteractionLaw law{2.0};
};

struct GlueReport {
    double M1 = 0, M2 = 0, F1 = 0, F2 = 0;
    long long N1 = 0, N2 = 0;
    double exponent = 0;
    double gamma = 0;  // N1 / N2

    // least-squares gluing over the segment extensions (m1, m2) >= 0
    double m1 = 0, m2 = 0;
    double infeasibility = 0;      // 2-norm of the three glue constraints
    double infeasibility_rel = 0;  // divided by L

    // single matching-equation roots under the mean-gap coupling
    double m_A = 0, m_B = 0;

    // compatibility indices and asymptotic coefficients
    double index1 = 0, index2 = 0;  // 2 M_i / a
    double c1 = 0, c4 = 0, d1 = 0, d4 = 0;
};

// Probes the asymmetric gluing: least-squares fit of the two gap-matching
// conditions plus the covering identity, and the two one-unknown roots m_A,
// m_B. Preconditions (exact rational): F1 N1 + F2 N2 = 0 and M1/M2 = N1/N2.
GlueReport glue_probe(const GlueInputs& inputs);

struct RepairResult {
    PiecewiseForce field;  // two-piece field with overrides at M and L
    Configuration config;
    double override_at_split = 0.0;   // force value placed at M
    double override_at_origin = 0.0;  // force value placed at L
    ResidualVector residual;
};

// Pins one particle at each breakpoint, solves the two pinned segments, and
// overrides the force at the breakpoints so the pinned particles balance.
RepairResult repair_gap_points(const Rational& L, const Rational& M,
                               const Rational& F1, const Rational& F2,
                               long long N1, long long N2,
                               const InteractionLaw& law);

}  // namespace ringeq

#endif
