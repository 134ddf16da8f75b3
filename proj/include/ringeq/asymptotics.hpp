// N-sweeps quantifying the uniform gap law (max deviation of N*gap/L from 1
// shrinking with N) and the per-particle fine-scale deviation profile on
// which the external force leaves its imprint.
#ifndef RINGEQ_ASYMPTOTICS_HPP
#define RINGEQ_ASYMPTOTICS_HPP

#include <vector>

#include "ringeq/model.hpp"
#include "ringeq/rational.hpp"

namespace ringeq {

struct SweepRow {
    long long count = 0;
    double deviation_inf = 0.0;  // D(N) = max_k |N gap_k / L - 1|
    double deviation_two = 0.0;  // 2-norm of the per-gap deviations
    double predicted = 0.0;      // two-term perturbative prediction of D(N)
};

struct SweepResult {
    std::vector<SweepRow> rows;
    // log-log slope of D against N, excluding the two smallest counts
    // (second-order terms pollute small N)
    double slope = 0.0;
};

// Builds the symmetric equilibrium for each admissible N (checked through
// the existence verdict) and tabulates the deviation statistic. Rows may be
// computed on several threads; the result order is by N regardless.
SweepResult uniformity_sweep(const Rational& L, const Rational& F,
                             const InteractionLaw& law,
                             const std::vector<long long>& counts,
                             int threads = 1);

struct FineScaleRow {
    std::size_t index = 0;  // gap index, 0-based
    double gap = 0.0;
    double deviation = 0.0;  // N gap / L - 1
    double predicted = 0.0;  // perturbative edge-deviation magnitude
};

struct FineScaleReport {
    std::vector<FineScaleRow> rows;
    double max_deviation = 0.0;
    double deviation_sum = 0.0;   // gap-sum identity: vanishes
    // absolute length scale of the force imprint, (L/N) * max deviation
    double imprint_scale = 0.0;
};

// Per-particle deviation profile of an equilibrium configuration (residual
// must already be below 1e-8 relative).
FineScaleReport fine_scale_report(const Configuration& config,
                                  const PiecewiseForce& field,
                                  const InteractionLaw& law);

}  // namespace ringeq

#endif
