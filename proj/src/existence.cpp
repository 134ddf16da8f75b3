#include "ringeq/existence.hpp"

#include <numeric>
#include <stdexcept>

namespace ringeq {

const char* to_string(VerdictKind kind) {
    switch (kind) {
        case VerdictKind::ConstructibleSymmetric: return "ConstructibleSymmetric";
        case VerdictKind::RepairableOnly: return "RepairableOnly";
        case VerdictKind::ImpossibleParity: return "ImpossibleParity";
        case VerdictKind::ImpossibleCirculation: return "ImpossibleCirculation";
        case VerdictKind::ImpossibleNoPartition: return "ImpossibleNoPartition";
        case VerdictKind::ImpossibleAsymmetric: return "ImpossibleAsymmetric";
        case VerdictKind::Inconclusive: return "Inconclusive";
    }
    return "Unknown";
}

Rational circulation(const PiecewiseForce& field) { return field.circulation(); }

std::optional<std::pair<long long, long long>> unique_partition(const Rational& F1,
                                                                const Rational& F2,
                                                                long long N) {
    if (!(F1 > Rational(0)) || !(F2 < Rational(0)))
        throw std::invalid_argument("unique_partition expects F1 > 0 > F2");
    // N1/N2 = -F2/F1 = p/q reduced; so N1 = k p, N2 = k q with k = N/(p+q).
    Rational ratio = -F2 / F1;
    long long p = ratio.numerator();
    long long q = ratio.denominator();
    if (N < 2 || (N % (p + q)) != 0) return std::nullopt;
    long long k = N / (p + q);
    return std::make_pair(k * p, k * q);
}

ExistenceVerdict verdict(const Rational& L, const Rational& M, const Rational& F1,
                         const Rational& F2, long long N, const InteractionLaw&) {
    if (!(Rational(0) < M && M < L))
        throw std::invalid_argument("split must lie strictly inside the circle");
    if (!(F1 > Rational(0)) || !(F2 < Rational(0)))
        throw std::invalid_argument("verdict expects F1 > 0 > F2");

    ExistenceVerdict v;
    const Rational M1 = M;
    const Rational M2 = L - M;
    const Rational circ = F1 * M1 + F2 * M2;
    auto partition = unique_partition(F1, F2, N);
    if (partition) {
        v.partition = partition;
        v.gamma = Rational(partition->first, partition->second);
    }

    if (circ != Rational(0)) {
        v.kind = VerdictKind::ImpossibleCirculation;
        v.failed_condition = "circulation";
        // Zero circulation is only necessary along sequences N -> infinity;
        // with a valid partition, finite-N equilibria are not excluded.
        v.asymptotic_regime = partition.has_value();
        v.repairable = true;
        return v;
    }
    if (!partition) {
        bool parity_case = (-F2 == F1) && (N % 2 != 0);
        v.kind = parity_case ? VerdictKind::ImpossibleParity
                             : VerdictKind::ImpossibleNoPartition;
        v.failed_condition = parity_case ? "parity" : "partition";
        v.repairable = true;
        return v;
    }

    // With zero circulation M1/M2 = -F2/F1 holds identically, and the
    // partition gives N1/N2 = -F2/F1; keep the explicit check anyway.
    if (M1 * Rational(partition->second) != M2 * Rational(partition->first)) {
        v.kind = VerdictKind::ImpossibleNoPartition;
        v.failed_condition = "commensurability";
        v.repairable = true;
        return v;
    }

    if (*v.gamma == Rational(1) && M1 == M2) {
        v.kind = VerdictKind::ConstructibleSymmetric;
        return v;
    }
    // gamma != 1: the paper's rejection is asymptotic, with the gap-point
    // override as the constructive escape hatch.
    v.kind = VerdictKind::ImpossibleAsymmetric;
    v.failed_condition = "gamma";
    v.asymptotic_regime = true;
    v.repairable = true;
    return v;
}

}  // namespace ringeq
