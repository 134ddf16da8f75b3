// Exact-arithmetic necessary conditions for equilibria under a two-piece
// field: zero circulation, the unique particle partition solving
// F1 N1 + F2 N2 = 0, and the commensurability chain M1/M2 = -F2/F1 = N1/N2.
#ifndef RINGEQ_EXISTENCE_HPP
#define RINGEQ_EXISTENCE_HPP

#include <optional>
#include <string>
#include <utility>

#include "ringeq/model.hpp"
#include "ringeq/rational.hpp"

namespace ringeq {

enum class VerdictKind {
    ConstructibleSymmetric,
    RepairableOnly,
    ImpossibleParity,
    ImpossibleCirculation,
    ImpossibleNoPartition,
    ImpossibleAsymmetric,
    Inconclusive,
};

const char* to_string(VerdictKind kind);

struct ExistenceVerdict {
    VerdictKind kind = VerdictKind::Inconclusive;
    std::optional<std::pair<long long, long long>> partition;  // (N1, N2)
    std::optional<Rational> gamma;                             // N1/N2
    // Set when the rejection rests on a large-N argument rather than exact
    // finite-N arithmetic; such rejections are not decisive at small N.
    bool asymptotic_regime = false;
    // When rejected for a breakpoint-count reason, repair_gap_points can
    // still balance particles pinned at the breakpoints.
    bool repairable = false;
    std::string failed_condition;  // identifier of the condition that failed

    bool impossible() const {
        return kind == VerdictKind::ImpossibleParity ||
               kind == VerdictKind::ImpossibleCirculation ||
               kind == VerdictKind::ImpossibleNoPartition ||
               kind == VerdictKind::ImpossibleAsymmetric;
    }
    bool exact_rejection() const { return impossible() && !asymptotic_regime; }
};

// Exact circulation of any rational piecewise field.
Rational circulation(const PiecewiseForce& field);

// Unique positive solution of F1 N1 + F2 N2 = 0 with N1 + N2 = N, if any.
// Requires F1 > 0 > F2.
std::optional<std::pair<long long, long long>> unique_partition(const Rational& F1,
                                                                const Rational& F2,
                                                                long long N);

// Applies the conditions in order: circulation, partition, commensurability,
// then the symmetric/asymmetric split on gamma = N1/N2.
ExistenceVerdict verdict(const Rational& L, const Rational& M, const Rational& F1,
                         const Rational& F2, long long N, const InteractionLaw& law);

}  // namespace ringeq

#endif
