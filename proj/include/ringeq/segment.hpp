// Auxiliary equilibrium problem on a segment: N points between inelastic
// walls at 0 and L under a constant force, endpoints pinned. The telescoped
// pair balance f(gap_k) = f(gap_1) + (k-1) F reduces the solve to a single
// monotone scalar root in the first gap.
#ifndef RINGEQ_SEGMENT_HPP
#define RINGEQ_SEGMENT_HPP

#include <vector>

#include "ringeq/model.hpp"

namespace ringeq {

struct SegmentProblem {
    double length = 1.0;   // wall separation
    int count = 3;         // points including both pinned endpoints
    double force = 0.0;    // constant force on the segment, >= 0
    InteractionLaw law{2.0};
};

struct SegmentSolution {
    SegmentProblem problem;
    std::vector<double> gaps;        // count-1 gaps, strictly decreasing for F > 0
    std::vector<double> deviations;  // delta_k with gap_k = mean * (1 + delta_k)
    double step = 0.0;               // q = (L/(N-1))^a * F
    double residual_norm = 0.0;      // inf-norm of the interior balance rows
    double first_gap() const { return gaps.front(); }
    double last_gap() const { return gaps.back(); }
    double ladder_offset(int k) const { return static_cast<double>(k - 1) * step; }
};

// Unique pinned equilibrium for F >= 0. Root of
//   S(g1) = sum_k (g1^-a + (k-1) F)^(-1/a) - L
// by bracketed bisection refined with Newton steps, to |S| <= 1e-13 L.
SegmentSolution solve_exact(const SegmentProblem& problem);

namespace detail {
// Testing hook: same solve from an explicit bracket.
SegmentSolution solve_exact_bracketed(const SegmentProblem& problem, double lo,
                                      double hi);
}  // namespace detail

struct DeltaExpansion {
    double first = 0.0;  // two-term expansion of delta_1
    double last = 0.0;   // two-term expansion of delta_{N-1}
};

// Two-term perturbative expansions of the edge deviations,
//   delta_1   =  q (N/2 - 1)/a + (1/a)(1/a + 1)/12 q^2 (N-2)(N-3)
//   delta_N-1 = -q (N/2 - 1)/a + (1/a)(1/a + 1)/12 q^2 (N-2)(N-3).
DeltaExpansion perturbative_deltas(const SegmentProblem& problem);

// Wall inequalities for the pinned endpoints:
//   F(0) - f(gap_1) <= 0  and  F(L) + f(gap_{N-1}) >= 0.
bool endpoint_feasibility(const SegmentSolution& solution, double force_at_0,
                          double force_at_length);

}  // namespace ringeq

#endif
