#include "ringeq/newton.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ringeq/numerics.hpp"

namespace ringeq {

const char* to_string(NewtonStatus status) {
    switch (status) {
        case NewtonStatus::Converged: return "Converged";
        case NewtonStatus::Stalled: return "Stalled";
        case NewtonStatus::OrderingViolated: return "OrderingViolated";
        case NewtonStatus::CrossedBreakpoint: return "CrossedBreakpoint";
        case NewtonStatus::MaxIterations: return "MaxIterations";
    }
    return "Unknown";
}

namespace {

double wrap_position(double x, double L) {
    double w = x - L * std::floor(x / L);
    return w == 0.0 ? L : w;
}

struct Chain {
    // raw positions: cyclically ordered, x[p] fixed; not necessarily inside (0, L]
    std::vector<double> x;
    double L;

    std::vector<double> gaps() const {
        const std::size_t n = x.size();
        std::vector<double> g(n);
        for (std::size_t i = 0; i + 1 < n; ++i) g[i] = x[i + 1] - x[i];
        g[n - 1] = x[0] + L - x[n - 1];
        return g;
    }
    bool ordered() const {
        for (double g : gaps())
            if (!(g > 0.0)) return false;
        return true;
    }
};

struct Residual {
    std::vector<double> r;
    double inf = 0.0;
    double scale = 0.0;
    double rel() const { return scale > 0.0 ? inf / scale : inf; }
};

Residual eval_residual(const Chain& c, const PiecewiseForce& field,
                       const InteractionLaw& law) {
    const std::size_t n = c.x.size();
    auto g = c.gaps();
    std::vector<double> f(n);
    Residual out;
    out.r.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        f[i] = law.pair_force(g[i]);
        out.scale = std::max(out.scale, f[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        double fb = f[(i + n - 1) % n];
        out.r[i] = fb + field(wrap_position(c.x[i], c.L)) - f[i];
        out.inf = std::max(out.inf, std::abs(out.r[i]));
    }
    return out;
}

}  // namespace

SolveReport solve(const Configuration& init, const PiecewiseForce& field,
                  const InteractionLaw& law, const NewtonOptions& opts) {
    const std::size_t n = init.size();
    if (opts.pin_index >= n)
        throw std::invalid_argument("pin index out of range");
    if (std::abs(field.circumference() - init.circumference()) != 0.0)
        throw std::invalid_argument("field and configuration circumference differ");

    Chain chain{init.positions(), init.circumference()};
    const std::size_t p = opts.pin_index;

    // unknown indices in natural order, skipping the pinned coordinate
    std::vector<std::size_t> unknowns;
    unknowns.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        if (i != p) unknowns.push_back(i);
    std::vector<int> col_of(n, -1);
    for (std::size_t j = 0; j < unknowns.size(); ++j)
        col_of[unknowns[j]] = static_cast<int>(j);

    std::vector<int> piece0(n);
    for (std::size_t i = 0; i < n; ++i)
        piece0[i] = field.piece_index(wrap_position(chain.x[i], chain.L));

    SolveReport report;
    report.pinned_index = p;

    Residual res = eval_residual(chain, field, law);
    const std::size_t m = n - 1;

    for (int iter = 0; iter <= opts.max_iterations; ++iter) {
        report.residual_history.push_back(res.inf);
        if (res.rel() <= opts.tolerance_rel) {
            report.status = NewtonStatus::Converged;
            report.iterations = iter;
            break;
        }
        if (iter == opts.max_iterations) {
            report.status = NewtonStatus::MaxIterations;
            report.iterations = iter;
            break;
        }

        // assemble the reduced Jacobian (tridiagonal + corners)
        auto g = chain.gaps();
        std::vector<double> slope(n);
        for (std::size_t i = 0; i < n; ++i) slope[i] = law.force_slope(g[i]);

        std::vector<double> lower(m, 0.0), diag(m, 0.0), upper(m, 0.0), rhs(m, 0.0);
        double corner_ur = 0.0, corner_ll = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            std::size_t k = unknowns[j];
            std::size_t kb = (k + n - 1) % n;
            std::size_t kf = (k + 1) % n;
            double d_prev = -slope[kb];               // d r_k / d x_{k-1}
            double d_self = slope[kb] + slope[k];     // d r_k / d x_k
            double d_next = -slope[k];                // d r_k / d x_{k+1}
            diag[j] = d_self;
            rhs[j] = -res.r[k];
            if (col_of[kb] >= 0) {
                int c = col_of[kb];
                if (c == static_cast<int>(j) - 1)
                    lower[j] = d_prev;
                else if (j == 0 && c == static_cast<int>(m) - 1)
                    corner_ur = d_prev;
                else
                    throw std::logic_error("unexpected Jacobian structure");
            }
            if (col_of[kf] >= 0) {
                int c = col_of[kf];
                if (c == static_cast<int>(j) + 1)
                    upper[j] = d_next;
                else if (j == m - 1 && c == 0)
                    corner_ll = d_next;
                else
                    throw std::logic_error("unexpected Jacobian structure");
            }
        }
        auto delta_u =
            solve_tridiagonal_with_corners(lower, diag, upper, rhs, corner_ur, corner_ll);

        std::vector<double> step(n, 0.0);
        for (std::size_t j = 0; j < m; ++j) step[unknowns[j]] = delta_u[j];

        // cap the whole step so no particle moves more than a fraction of its
        // smaller adjacent gap
        double cap = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (step[i] == 0.0) continue;
            double g_small = std::min(g[i], g[(i + n - 1) % n]);
            cap = std::min(cap, opts.step_fraction * g_small / std::abs(step[i]));
        }

        bool crossing_blocked = false;
        bool ordering_blocked = false;
        bool accepted = false;
        double t = cap;
        for (int halving = 0; halving < 40 && !accepted; ++halving, t *= 0.5) {
            Chain trial = chain;
            for (std::size_t i = 0; i < n; ++i) trial.x[i] += t * step[i];
            if (!trial.ordered()) {
                ordering_blocked = true;
                continue;
            }
            bool crossed = false;
            for (std::size_t i = 0; i < n && !crossed; ++i)
                crossed =
                    field.piece_index(wrap_position(trial.x[i], trial.L)) != piece0[i];
            if (crossed) {
                crossing_blocked = true;
                continue;
            }
            Residual trial_res = eval_residual(trial, field, law);
            if (trial_res.inf <= res.inf * (1.0 - 1e-4 * (t / cap)) ||
                trial_res.rel() <= opts.tolerance_rel) {
                chain = std::move(trial);
                res = std::move(trial_res);
                accepted = true;
            }
        }
        if (!accepted) {
            report.status = crossing_blocked ? NewtonStatus::CrossedBreakpoint
                            : ordering_blocked ? NewtonStatus::OrderingViolated
                                               : NewtonStatus::Stalled;
            report.iterations = iter;
            break;
        }
    }

    // normalize to (0, L] and restore sorted labels
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = wrap_position(chain.x[i], chain.L);
    std::sort(xs.begin(), xs.end());
    report.config = Configuration(RingGeometry{chain.L}, std::move(xs));
    auto final_res = residual(report.config, field, law);
    report.residual_norm = final_res.inf_norm;
    report.residual_rel = final_res.relative_inf_norm();
    report.note = "pinned x" + std::to_string(p + 1);
    return report;
}

namespace detail {

std::vector<JacobianRow> residual_jacobian(const Configuration& config,
                                           const InteractionLaw& law) {
    const std::size_t n = config.size();
    std::vector<double> slope(n);
    for (std::size_t i = 0; i < n; ++i)
        slope[i] = law.force_slope(config.gap_after(i));
    std::vector<JacobianRow> rows(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t kb = (k + n - 1) % n;
        rows[k] = {-slope[kb], slope[kb] + slope[k], -slope[k]};
    }
    return rows;
}

}  // namespace detail

}  // namespace ringeq
