#include "ringeq/dynamics.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ringeq/numerics.hpp"

namespace ringeq {

const char* to_string(RelaxStatus status) {
    switch (status) {
        case RelaxStatus::Settled: return "Settled";
        case RelaxStatus::Diverged: return "Diverged";
        case RelaxStatus::MaxTime: return "MaxTime";
    }
    return "Unknown";
}

namespace {

double wrap_position(double x, double L) {
    double w = x - L * std::floor(x / L);
    return w == 0.0 ? L : w;
}

struct State {
    std::vector<double> x;  // unwrapped, strictly increasing, x[n-1] - x[0] < L
    std::vector<double> v;
    double L;

    std::vector<double> gaps() const {
        const std::size_t n = x.size();
        std::vector<double> g(n);
        for (std::size_t i = 0; i + 1 < n; ++i) g[i] = x[i + 1] - x[i];
        g[n - 1] = x[0] + L - x[n - 1];
        return g;
    }
};

struct Forces {
    std::vector<double> f;
    double residual_rel = 0.0;
    double force_scale = 0.0;
    double stiffness = 0.0;  // max |f'(gap)|, used to keep the step stable
};

Forces eval_forces(const State& s, const PiecewiseForce& field,
                   const InteractionLaw& law) {
    const std::size_t n = s.x.size();
    auto g = s.gaps();
    std::vector<double> pf(n);
    Forces out;
    out.f.resize(n);
    double inf = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        pf[i] = law.pair_force(g[i]);
        out.force_scale = std::max(out.force_scale, pf[i]);
        out.stiffness = std::max(out.stiffness, law.exponent() * pf[i] / g[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        out.f[i] = pf[(i + n - 1) % n] + field(wrap_position(s.x[i], s.L)) - pf[i];
        inf = std::max(inf, std::abs(out.f[i]));
    }
    out.residual_rel = out.force_scale > 0.0 ? inf / out.force_scale : inf;
    return out;
}

Configuration to_configuration(const State& s) {
    std::vector<double> xs(s.x.size());
    for (std::size_t i = 0; i < s.x.size(); ++i) xs[i] = wrap_position(s.x[i], s.L);
    std::sort(xs.begin(), xs.end());
    return Configuration(RingGeometry{s.L}, std::move(xs));
}

}  // namespace

std::pair<RelaxReport, Trajectory> relax(const Configuration& init,
                                         const PiecewiseForce& field,
                                         const InteractionLaw& law,
                                         const DynamicsParams& params) {
    if (params.mass <= 0.0) throw std::invalid_argument("mass must be positive");
    if (params.max_time <= 0.0) throw std::invalid_argument("max_time must be positive");

    const std::size_t n = init.size();
    const double L = init.circumference();
    State s{init.positions(), std::vector<double>(n, 0.0), L};

    double stiff = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        stiff = std::max(stiff, std::abs(law.force_slope(init.gap_after(i))));

    const bool overdamped_mode = params.mode == DynamicsMode::Overdamped;
    const double damping =
        params.damping >= 0.0 ? params.damping
                              : 2.0 * std::sqrt(params.mass * stiff);
    // first-order flow is stiffness-limited; the second-order default
    // resolves the stiffest pair at mean spacing
    const double dt_base =
        params.dt > 0.0 ? params.dt
        : overdamped_mode
            ? 0.2 / stiff
            : 0.1 * std::sqrt(params.mass *
                              std::pow(L / static_cast<double>(n),
                                       law.exponent() + 2.0));
    const double v_tol =
        params.settle_velocity >= 0.0
            ? params.settle_velocity
            : 1e-6 * (L / static_cast<double>(n)) * std::sqrt(stiff / params.mass);

    const bool track_energy = field.circulation() == Rational(0);
    const bool overdamped = overdamped_mode;

    RelaxReport report;
    report.damping_used = overdamped ? 0.0 : damping;
    report.dt_base = dt_base;

    Trajectory traj;
    auto sample = [&](double t, const Forces& fr) {
        traj.times.push_back(t);
        std::vector<double> xs(n), vs(n);
        for (std::size_t i = 0; i < n; ++i) {
            xs[i] = wrap_position(s.x[i], L);
            vs[i] = s.v[i];
        }
        traj.positions.push_back(std::move(xs));
        traj.velocities.push_back(std::move(vs));
        traj.residual_norms.push_back(fr.residual_rel);
        if (track_energy) {
            double kinetic = 0.0;
            for (double vi : s.v) kinetic += 0.5 * params.mass * vi * vi;
            traj.energies.push_back(energy(to_configuration(s), field, law) + kinetic);
        } else {
            traj.energies.push_back(std::numeric_limits<double>::quiet_NaN());
        }
    };

    Forces fr = eval_forces(s, field, law);
    double t = 0.0;
    double dt = dt_base;
    long long step_count = 0;
    const double dt_floor = dt_base * 0x1p-40;
    sample(t, fr);

    auto vmax = [&]() {
        double m = 0.0;
        for (double vi : s.v) m = std::max(m, std::abs(vi));
        return m;
    };

    while (t < params.max_time) {
        if (fr.residual_rel <= params.settle_residual_rel &&
            (overdamped || vmax() <= v_tol)) {
            report.status = RelaxStatus::Settled;
            break;
        }

        // stability clamp against compressed regions stiffer than the start
        double dt_limit = overdamped ? 0.2 / fr.stiffness
                                     : 0.5 * std::sqrt(params.mass / fr.stiffness);
        dt = std::min(dt, dt_limit);

        // attempt a step; halve dt until no gap shrinks below a quarter of
        // its current value
        bool accepted = false;
        while (!accepted) {
            State trial = s;
            Forces trial_f;
            if (overdamped) {
                for (std::size_t i = 0; i < n; ++i) trial.x[i] += dt * fr.f[i];
            } else {
                const double decay = std::exp(-damping * dt / (2.0 * params.mass));
                for (std::size_t i = 0; i < n; ++i) {
                    trial.v[i] += 0.5 * dt * fr.f[i] / params.mass;
                    trial.v[i] *= decay;
                    trial.x[i] += dt * trial.v[i];
                }
            }
            auto g_old = s.gaps();
            auto g_new = trial.gaps();
            bool ok = true;
            for (std::size_t i = 0; i < n; ++i)
                if (!(g_new[i] > 0.25 * g_old[i])) ok = false;
            if (!ok) {
                dt *= 0.5;
                if (dt < dt_floor) {
                    report.status = RelaxStatus::Diverged;
                    sample(t, fr);
                    report.config = to_configuration(s);
                    auto res = residual(report.config, field, law);
                    report.residual_norm = res.inf_norm;
                    report.residual_rel = res.relative_inf_norm();
                    report.velocity_norm = vmax();
                    report.time = t;
                    report.steps = step_count;
                    report.partition = force_sum(report.config, field).counts;
                    return {report, traj};
                }
                continue;
            }
            trial_f = eval_forces(trial, field, law);
            if (!overdamped) {
                const double decay = std::exp(-damping * dt / (2.0 * params.mass));
                for (std::size_t i = 0; i < n; ++i) {
                    trial.v[i] *= decay;
                    trial.v[i] += 0.5 * dt * trial_f.f[i] / params.mass;
                }
            }
            s = std::move(trial);
            fr = std::move(trial_f);
            accepted = true;
        }
        assert(s.gaps().front() > 0.0);
        t += dt;
        ++step_count;
        dt = std::min(dt * 1.25, dt_base);
        if (step_count % params.sample_every == 0) sample(t, fr);
    }
    if (report.status != RelaxStatus::Settled && t >= params.max_time)
        report.status = RelaxStatus::MaxTime;

    sample(t, fr);
    report.config = to_configuration(s);
    auto res = residual(report.config, field, law);
    report.residual_norm = res.inf_norm;
    report.residual_rel = res.relative_inf_norm();
    report.velocity_norm = vmax();
    report.time = t;
    report.steps = step_count;
    report.partition = force_sum(report.config, field).counts;
    return {report, traj};
}

}  // namespace ringeq
