// Damped Newton iteration on the cyclic equilibrium residual, with the exact
// tridiagonal-plus-corners Jacobian and one coordinate pinned to fix the
// rotational gauge. O(N) per iteration.
#ifndef RINGEQ_NEWTON_HPP
#define RINGEQ_NEWTON_HPP

#include <cstddef>
#include <string>

#include "ringeq/model.hpp"

namespace ringeq {

enum class NewtonStatus {
    Converged,
    Stalled,
    OrderingViolated,
    CrossedBreakpoint,
    MaxIterations,
};

const char* to_string(NewtonStatus status);

struct NewtonOptions {
    double tolerance_rel = 1e-12;  // on ||r||_inf / max_k f(gap_k)
    int max_iterations = 200;
    // per-particle step cap as a fraction of its smaller adjacent gap,
    // keeping evaluations away from the contact singularity
    double step_fraction = 0.4;
    std::size_t pin_index = 0;  // coordinate pinned to fix the gauge
};

struct SolveReport {
    NewtonStatus status = NewtonStatus::MaxIterations;
    Configuration config{RingGeometry{1.0}, {0.5, 1.0}};
    double residual_norm = 0.0;
    double residual_rel = 0.0;
    int iterations = 0;
    std::size_t pinned_index = 0;
    std::string note;
    std::vector<double> residual_history;  // inf-norm after each iteration
    bool converged() const { return status == NewtonStatus::Converged; }
};

SolveReport solve(const Configuration& init, const PiecewiseForce& field,
                  const InteractionLaw& law, const NewtonOptions& opts = {});

namespace detail {
// Row k of the full cyclic Jacobian: entries on x_{k-1}, x_k, x_{k+1}.
struct JacobianRow {
    double prev, self, next;
};
std::vector<JacobianRow> residual_jacobian(const Configuration& config,
                                           const InteractionLaw& law);
}  // namespace detail

}  // namespace ringeq

#endif
