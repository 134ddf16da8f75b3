// Shared test utilities and independent oracles. The oracles here must not
// reuse the solver paths they are checking: the pinned-chain relaxer only
// evaluates pair forces, and the cyclic ladder solves the equilibrium system
// directly from the telescoped balance.
#ifndef RINGEQ_TESTS_SUPPORT_HPP
#define RINGEQ_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "ringeq/model.hpp"

namespace ringeq::testing {

inline Configuration equidistant(double L, int N) {
    std::vector<double> gaps(static_cast<std::size_t>(N),
                             L / static_cast<double>(N));
    return from_gaps(GapVector{RingGeometry{L}, gaps[0], gaps});
}

inline Configuration random_configuration(std::mt19937_64& rng, double L, int N,
                                          double min_gap_frac = 0.2) {
    std::uniform_real_distribution<double> u(min_gap_frac, 1.0);
    std::vector<double> gaps(static_cast<std::size_t>(N));
    double total = 0.0;
    for (auto& g : gaps) {
        g = u(rng);
        total += g;
    }
    for (auto& g : gaps) g *= L / total;
    std::uniform_real_distribution<double> ua(0.0, gaps.back());
    double anchor = gaps.back() - ua(rng);  // in (0, wrap gap]
    return from_gaps(GapVector{RingGeometry{L}, anchor, gaps});
}

// Random ordered configuration with a prescribed number of particles on each
// arc of a two-piece field with split at M.
inline Configuration random_partitioned(std::mt19937_64& rng, double L, double M,
                                        int N1, int N2) {
    const int N = N1 + N2;
    const double floor_gap = 0.05 * L / static_cast<double>(N);
    std::uniform_real_distribution<double> u1(floor_gap, M);
    std::uniform_real_distribution<double> u2(M + floor_gap, L);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<double> xs;
        xs.reserve(static_cast<std::size_t>(N));
        for (int i = 0; i < N1; ++i) xs.push_back(u1(rng));
        for (int i = 0; i < N2; ++i) xs.push_back(u2(rng));
        std::sort(xs.begin(), xs.end());
        bool ok = true;
        for (int i = 0; ok && i < N; ++i) {
            double gap = i + 1 < N ? xs[i + 1] - xs[i] : xs[0] + L - xs[N - 1];
            ok = gap > floor_gap;
        }
        if (ok) return Configuration(RingGeometry{L}, std::move(xs));
    }
    throw std::runtime_error("failed to sample a partitioned configuration");
}

// Smallest over all cyclic rotations of the max gap difference.
inline double best_rotation_distance(const std::vector<double>& a,
                                     const std::vector<double>& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    const std::size_t n = a.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < n; ++r) {
        double worst = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            worst = std::max(worst, std::abs(a[k] - b[(k + r) % n]));
        best = std::min(best, worst);
    }
    return best;
}

// Damped relaxation of a pinned chain on [0, length]: endpoints fixed,
// interior particles follow kick-drift-kick with exponential damping. Only
// pair forces enter; this is the independent route to the segment solution.
inline std::vector<double> pinned_chain_relax_gaps(double length, int count,
                                                   double force,
                                                   const InteractionLaw& law,
                                                   double tol_rel = 1e-12) {
    const int n = count;
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        x[static_cast<std::size_t>(i)] =
            length * static_cast<double>(i) / static_cast<double>(n - 1);
    std::vector<double> v(static_cast<std::size_t>(n), 0.0);

    const double mean = length / static_cast<double>(n - 1);
    const double stiff = std::abs(law.force_slope(mean));
    // damp near the slowest chain mode for fast settling
    const double damping =
        2.0 * std::sqrt(stiff) * std::sin(M_PI / (2.0 * static_cast<double>(n)));
    const double dt0 = 0.25 / std::sqrt(stiff);

    auto forces = [&](std::vector<double>& f) {
        double scale = 0.0;
        std::vector<double> pf(static_cast<std::size_t>(n - 1));
        for (int i = 0; i + 1 < n; ++i) {
            pf[static_cast<std::size_t>(i)] = law.pair_force(
                x[static_cast<std::size_t>(i + 1)] - x[static_cast<std::size_t>(i)]);
            scale = std::max(scale, pf[static_cast<std::size_t>(i)]);
        }
        double rmax = 0.0;
        for (int i = 1; i + 1 < n; ++i) {
            f[static_cast<std::size_t>(i)] =
                pf[static_cast<std::size_t>(i - 1)] + force -
                pf[static_cast<std::size_t>(i)];
            rmax = std::max(rmax, std::abs(f[static_cast<std::size_t>(i)]));
        }
        return scale > 0.0 ? rmax / scale : rmax;
    };

    std::vector<double> f(static_cast<std::size_t>(n), 0.0);
    double rel = forces(f);
    double dt = dt0;
    const long long max_steps = 40'000'000;
    for (long long step = 0; step < max_steps && rel > tol_rel; ++step) {
        const double decay = std::exp(-0.5 * damping * dt);
        std::vector<double> xs = x, vs = v;
        for (int i = 1; i + 1 < n; ++i) {
            auto k = static_cast<std::size_t>(i);
            vs[k] = (vs[k] + 0.5 * dt * f[k]) * decay;
            xs[k] += dt * vs[k];
        }
        bool ok = true;
        for (int i = 0; ok && i + 1 < n; ++i)
            ok = (xs[static_cast<std::size_t>(i + 1)] - xs[static_cast<std::size_t>(i)]) >
                 0.25 * (x[static_cast<std::size_t>(i + 1)] - x[static_cast<std::size_t>(i)]);
        if (!ok) {
            dt *= 0.5;
            continue;
        }
        x = std::move(xs);
        v = std::move(vs);
        rel = forces(f);
        for (int i = 1; i + 1 < n; ++i) {
            auto k = static_cast<std::size_t>(i);
            v[k] = v[k] * decay + 0.5 * dt * f[k];
        }
        dt = std::min(dt * 1.05, dt0);
    }
    std::vector<double> gaps(static_cast<std::size_t>(n - 1));
    for (int i = 0; i + 1 < n; ++i)
        gaps[static_cast<std::size_t>(i)] =
            x[static_cast<std::size_t>(i + 1)] - x[static_cast<std::size_t>(i)];
    return gaps;
}

// Direct finite-N equilibrium for the two-piece field from the telescoped
// gap ladder: one monotone scalar root plus the occupancy window. Decides
// existence exactly (up to rounding) and produces a configuration when the
// window is nonempty.
struct LadderResult {
    bool exists = false;
    double overlap = 0.0;  // position of the root inside the window
    double window = 0.0;   // seam-gap window width
    std::optional<Configuration> config;
};

inline LadderResult ladder_equilibrium(double L, double M, double F1, double F2,
                                       long long N1, long long N2,
                                       const InteractionLaw& law) {
    const long long N = N1 + N2;
    const double a = law.exponent();
    auto gap_sum = [&](double t, std::vector<double>* out) {
        double total = 0.0;
        if (out) out->clear();
        auto push = [&](double g) {
            total += g;
            if (out) out->push_back(g);
        };
        for (long long k = 1; k <= N1; ++k)
            push(std::pow(t + static_cast<double>(k) * F1, -1.0 / a));
        for (long long j = 1; j < N2; ++j)
            push(std::pow(t + static_cast<double>(N1) * F1 +
                              static_cast<double>(j) * F2,
                          -1.0 / a));
        push(std::pow(t, -1.0 / a));
        return total;
    };
    double t = std::pow(L / static_cast<double>(N), -a);
    double lo = t, hi = t;
    while (gap_sum(lo, nullptr) < L) lo *= 0.5;
    while (gap_sum(hi, nullptr) > L) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (gap_sum(mid, nullptr) > L)
            lo = mid;
        else
            hi = mid;
    }
    std::vector<double> g;
    gap_sum(0.5 * (lo + hi), &g);

    double span1 = 0.0;
    for (long long k = 0; k + 1 < N1; ++k) span1 += g[static_cast<std::size_t>(k)];
    const double seam_M = g[static_cast<std::size_t>(N1 - 1)];
    const double seam_L = g.back();

    LadderResult out;
    out.window = seam_M + seam_L;
    out.overlap = seam_L + span1 + seam_M - M;
    out.exists = out.overlap > 0.0 && out.overlap < out.window;
    if (out.exists) {
        double s_lo = std::max(0.0, M - span1 - seam_M);
        double s_hi = std::min(M - span1, seam_L);
        double s = 0.5 * (s_lo + s_hi);
        std::vector<double> xs(static_cast<std::size_t>(N));
        xs[0] = s;
        for (long long i = 1; i < N; ++i)
            xs[static_cast<std::size_t>(i)] =
                xs[static_cast<std::size_t>(i - 1)] + g[static_cast<std::size_t>(i - 1)];
        out.config = Configuration(RingGeometry{L}, std::move(xs));
    }
    return out;
}

}  // namespace ringeq::testing

#endif
