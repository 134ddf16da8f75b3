// Damped second-order dynamics (kick-drift-kick with exact exponential
// damping) and its overdamped first-order limit, used to relax arbitrary
// ordered states toward equilibria. Particles keep their indices for the
// whole run; repulsion is singular at contact, so ordering is preserved and
// an adaptive step guard keeps gaps away from collapse.
#ifndef RINGEQ_DYNAMICS_HPP
#define RINGEQ_DYNAMICS_HPP

#include <vector>

#include "ringeq/model.hpp"

namespace ringeq {

enum class DynamicsMode { SecondOrder, Overdamped };
enum class RelaxStatus { Settled, Diverged, MaxTime };

const char* to_string(RelaxStatus status);

struct DynamicsParams {
    double mass = 1.0;
    double damping = -1.0;   // < 0: near-critical estimate from the initial state
    double dt = -1.0;        // < 0: resolves the stiffest pair at mean spacing
    double max_time = 1e4;
    double settle_residual_rel = 1e-10;  // on ||r||_inf / max f(gap)
    double settle_velocity = -1.0;       // < 0: scaled from the initial stiffness
    DynamicsMode mode = DynamicsMode::SecondOrder;
    int sample_every = 16;               // trajectory sampling stride, in steps
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> positions;
    std::vector<std::vector<double>> velocities;
    std::vector<double> residual_norms;  // relative inf-norm
    std::vector<double> energies;        // NaN when circulation != 0
};

struct RelaxReport {
    RelaxStatus status = RelaxStatus::MaxTime;
    Configuration config{RingGeometry{1.0}, {0.5, 1.0}};
    double residual_norm = 0.0;
    double residual_rel = 0.0;
    double velocity_norm = 0.0;
    double time = 0.0;
    long long steps = 0;
    double damping_used = 0.0;
    double dt_base = 0.0;
    std::vector<int> partition;  // particles per force piece at the end
    bool settled() const { return status == RelaxStatus::Settled; }
};

std::pair<RelaxReport, Trajectory> relax(const Configuration& init,
                                         const PiecewiseForce& field,
                                         const InteractionLaw& law,
                                         const DynamicsParams& params = {});

}  // namespace ringeq

#endif
