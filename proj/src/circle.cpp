#include "ringeq/circle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "ringeq/numerics.hpp"

namespace ringeq {

namespace {

// Compensated position walker with exact wrap into (0, L]. The wrap
// subtraction is exact for positions in (L, 2L), so anchoring a walk at a
// target point keeps that point bit-exact.
struct CircleWalker {
    double position;
    double compensation = 0.0;
    double circumference;

    void advance(double gap) {
        double y = gap + compensation;
        double t = position + y;
        compensation = (position - t) + y;
        position = t;
        if (position > circumference) position -= circumference;
    }
};

double circular_offset(double from, double to, double L) {
    // signed clockwise offset in (-L/2, L/2]
    double d = to - from;
    d -= L * std::round(d / L);
    return d;
}

struct SymmetricChecks {
    long long on_first_arc = 0;
    double mirror_defect = 0.0;
};

SymmetricChecks check_occupancy_and_mirror(const Configuration& config, double M) {
    SymmetricChecks out;
    const std::size_t n = config.size();
    for (double x : config.positions())
        if (x <= M) ++out.on_first_arc;
    for (std::size_t k = 1; k <= n / 2; ++k) {
        double defect =
            std::abs(config.gap_after(k - 1) - config.gap_after(n - k - 1));
        out.mirror_defect = std::max(out.mirror_defect, defect);
    }
    return out;
}

// residual of the symmetric field +F on (0, M], -F on (M, L]
ResidualVector symmetric_residual(const Configuration& config, double M,
                                  double force, const InteractionLaw& law) {
    const std::size_t n = config.size();
    ResidualVector out;
    out.values.resize(n);
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) {
        f[i] = law.pair_force(config.gap_after(i));
        out.force_scale = std::max(out.force_scale, f[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        double external = config[i] <= M ? force : -force;
        out.values[i] = f[(i + n - 1) % n] + external - f[i];
        out.inf_norm = std::max(out.inf_norm, std::abs(out.values[i]));
    }
    return out;
}

}  // namespace

SymmetricBuild construct_symmetric_detailed(const SymmetricSpec& spec) {
    const double L = spec.circumference;
    if (!(L > 0.0)) throw std::invalid_argument("circumference must be positive");
    if (!(spec.force > 0.0)) throw std::invalid_argument("force must be positive");
    const long long N = spec.count;
    if (N % 2 != 0)
        throw ParityError("no fixed configuration exists for odd particle counts "
                          "on the symmetric two-arc field");
    if (N < 4) throw std::invalid_argument("count must be an even number >= 4");

    const double M = 0.5 * L;
    const int half_count = static_cast<int>(N / 2 + 2);
    auto solve_half = [&](double m) {
        return solve_exact(SegmentProblem{M + m, half_count, spec.force, spec.law});
    };
    auto defect_of = [&](const SegmentSolution& s, double m) {
        return 2.0 * m - s.first_gap() - s.last_gap();
    };

    // damped fixed point m <- m + (mean of edge gaps - m)/2, with a bisection
    // safeguard for the small-N regime where the contraction is not proven
    const double m_tol = 1e-14 * L;
    double m = M / static_cast<double>(N);
    SegmentSolution half = solve_half(m);
    double defect = defect_of(half, m);
    for (int it = 0; it < 120 && std::abs(defect) > m_tol; ++it) {
        m += 0.5 * (0.5 * (half.first_gap() + half.last_gap()) - m);
        half = solve_half(m);
        defect = defect_of(half, m);
    }
    if (std::abs(defect) > m_tol) {
        double lo = m, hi = m;
        while (defect_of(solve_half(lo), lo) > 0.0) lo *= 0.5;
        while (defect_of(solve_half(hi), hi) < 0.0) hi *= 2.0;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            half = solve_half(mid);
            defect = defect_of(half, mid);
            m = mid;
            if (std::abs(defect) <= m_tol) break;
            if (defect < 0.0)
                lo = mid;
            else
                hi = mid;
        }
        if (std::abs(defect) > m_tol)
            throw std::runtime_error("overlap equation did not converge");
    }

    // circle gap pattern: the wrap gap is the largest segment gap, the arcs
    // carry the segment ladder clockwise and mirrored back
    const auto& d = half.gaps;  // N/2 + 1 gaps, strictly decreasing
    const std::size_t n = static_cast<std::size_t>(N);
    std::vector<double> pattern(n);
    pattern[n - 1] = d[0];
    for (std::size_t k = 0; k < n / 2; ++k) pattern[k] = d[k + 1];
    for (std::size_t j = n / 2; j + 1 < n; ++j) pattern[j] = d[n - j - 1];

    const double b = 0.5 * d[0];
    std::vector<double> base(n);
    CircleWalker walk{d[0] - b, 0.0, L};
    base[0] = walk.position;
    for (std::size_t j = 1; j < n; ++j) {
        walk.advance(pattern[j - 1]);
        base[j] = walk.position;
    }

    SymmetricBuild build{
        Configuration(RingGeometry{L}, base), m, b, half, half.last_gap(), {}};

    auto verify = [&](const Configuration& config, bool target_path,
                      double target_margin) {
        auto checks = check_occupancy_and_mirror(config, M);
        if (checks.on_first_arc != N / 2) {
            if (target_path)
                throw InfeasibleTarget(
                    "target point lies outside the attainable window of every "
                    "particle (occupancy inequalities violated after the shift)",
                    target_margin);
            throw std::runtime_error("symmetric construction lost arc occupancy");
        }
        if (checks.mirror_defect > 1e-12 * L) {
            if (target_path)
                throw InfeasibleTarget(
                    "shifted configuration is not mirror-aligned with the "
                    "breakpoints (target outside the attainable window)",
                    target_margin);
            throw std::runtime_error("symmetric construction lost mirror symmetry");
        }
        auto res = symmetric_residual(config, M, spec.force, spec.law);
        if (res.relative_inf_norm() > 1e-10) {
            if (target_path)
                throw InfeasibleTarget(
                    "shifted configuration fails the equilibrium residual check",
                    target_margin);
            throw std::runtime_error("symmetric construction residual too large");
        }
        return res;
    };

    build.residual = verify(build.config, false, 0.0);

    if (spec.target) {
        const double x = *spec.target;
        if (!(x > 0.0 && x <= L))
            throw std::invalid_argument("target must lie in (0, L]");
        std::size_t nearest = 0;
        double best = std::abs(circular_offset(base[0], x, L));
        for (std::size_t j = 1; j < n; ++j) {
            double dist = std::abs(circular_offset(base[j], x, L));
            if (dist < best) {
                best = dist;
                nearest = j;
            }
        }
        double margin = best - 0.5 * build.window;

        // rebuild anchored at the target so it is contained bit-exactly
        std::vector<double> shifted(n);
        CircleWalker anchored{x, 0.0, L};
        shifted[nearest] = x;
        for (std::size_t step = 1; step < n; ++step) {
            std::size_t from = (nearest + step - 1) % n;
            std::size_t idx = (nearest + step) % n;
            anchored.advance(pattern[from]);
            shifted[idx] = anchored.position;
        }
        std::sort(shifted.begin(), shifted.end());
        Configuration candidate(RingGeometry{L}, std::move(shifted));
        build.residual = verify(candidate, true, margin);
        build.config = std::move(candidate);
        build.shift = L - build.config.positions().back();
    }

    return build;
}

Configuration construct_symmetric(const SymmetricSpec& spec) {
    return construct_symmetric_detailed(spec).config;
}

namespace {

struct GlueSystem {
    double M1, M2, F1, F2abs, L;
    int n1, n2;
    InteractionLaw law;

    std::array<double, 3> constraints(double m1, double m2) const {
        auto u1 = solve_exact(SegmentProblem{M1 + m1, n1 + 2, F1, law});
        auto u2 = solve_exact(SegmentProblem{M2 + m2, n2 + 2, F2abs, law});
        return {u1.first_gap() - u2.first_gap(), u1.last_gap() - u2.last_gap(),
                (M1 + m1) + (M2 + m2) - u1.first_gap() - u1.last_gap() - L};
    }
};

double norm2(const std::array<double, 3>& r) {
    return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
}

// Gauss-Newton on the three glue constraints over (m1, m2) clamped to
// m_i >= 0; the nonnegative overlap is what makes the residual an
// infeasibility measure (the unconstrained system always has a root).
std::pair<std::array<double, 2>, double> glue_least_squares(const GlueSystem& sys) {
    std::array<double, 2> m = {sys.M1 / (sys.n1 + 1), sys.M2 / (sys.n2 + 1)};
    const std::array<double, 2> fd_step = {1e-6 * m[0] + 1e-12,
                                           1e-6 * m[1] + 1e-12};
    std::array<bool, 2> active = {false, false};

    auto resid = [&](const std::array<double, 2>& p) {
        return sys.constraints(p[0], p[1]);
    };

    std::array<double, 3> R = resid(m);
    for (int iter = 0; iter < 80; ++iter) {
        // central-difference Jacobian
        double J[3][2];
        for (int j = 0; j < 2; ++j) {
            auto hi = m, lo = m;
            hi[j] += fd_step[j];
            lo[j] = std::max(0.0, lo[j] - fd_step[j]);
            auto Rhi = resid(hi);
            auto Rlo = resid(lo);
            double width = hi[j] - lo[j];
            for (int i = 0; i < 3; ++i) J[i][j] = (Rhi[i] - Rlo[i]) / width;
        }
        double grad[2] = {0.0, 0.0};
        for (int j = 0; j < 2; ++j)
            for (int i = 0; i < 3; ++i) grad[j] += J[i][j] * R[i];
        for (int j = 0; j < 2; ++j)
            if (active[j] && grad[j] < 0.0) active[j] = false;

        // normal equations over the free variables with a small Levenberg shift
        double A[2][2] = {{0, 0}, {0, 0}};
        for (int i = 0; i < 3; ++i) {
            A[0][0] += J[i][0] * J[i][0];
            A[0][1] += J[i][0] * J[i][1];
            A[1][1] += J[i][1] * J[i][1];
        }
        A[1][0] = A[0][1];
        double lambda = 1e-12 * std::max(A[0][0], A[1][1]) + 1e-300;
        std::array<double, 2> delta = {0.0, 0.0};
        if (!active[0] && !active[1]) {
            double a11 = A[0][0] + lambda, a22 = A[1][1] + lambda, a12 = A[0][1];
            double det = a11 * a22 - a12 * a12;
            delta[0] = (-grad[0] * a22 + grad[1] * a12) / det;
            delta[1] = (-grad[1] * a11 + grad[0] * a12) / det;
        } else if (!active[0]) {
            delta[0] = -grad[0] / (A[0][0] + lambda);
        } else if (!active[1]) {
            delta[1] = -grad[1] / (A[1][1] + lambda);
        } else {
            break;  // both clamped and no descent direction into the interior
        }

        double scale = 1.0;
        for (int j = 0; j < 2; ++j)
            if (delta[j] < 0.0 && m[j] + delta[j] < 0.0)
                scale = std::min(scale, -m[j] / delta[j]);
        bool clamped = false;
        for (int j = 0; j < 2; ++j) {
            m[j] += scale * delta[j];
            if (m[j] <= 0.0) {
                m[j] = 0.0;
                if (!active[j]) clamped = true;
                active[j] = true;
            }
        }
        R = resid(m);
        double step_size = std::abs(scale) *
                           std::sqrt(delta[0] * delta[0] + delta[1] * delta[1]);
        if (step_size <= 1e-15 * sys.L && !clamped) break;
    }
    return {m, norm2(resid(m))};
}

}  // namespace

GlueReport glue_probe(const GlueInputs& in) {
    if (!(in.M1 > Rational(0)) || !(in.M2 > Rational(0)))
        throw std::invalid_argument("arc lengths must be positive");
    if (!(in.F1 > Rational(0)) || !(in.F2 < Rational(0)))
        throw std::invalid_argument("glue probe expects F1 > 0 > F2");
    if (in.N1 < 1 || in.N2 < 1)
        throw std::invalid_argument("particle counts must be positive");
    if (in.F1 * Rational(in.N1) + in.F2 * Rational(in.N2) != Rational(0))
        throw GluePreconditionError(
            "force_partition", "F1*N1 + F2*N2 = 0 fails: got " +
                                   format_rational(in.F1 * Rational(in.N1) +
                                                   in.F2 * Rational(in.N2)));
    if (in.M1 * Rational(in.N2) != in.M2 * Rational(in.N1))
        throw GluePreconditionError(
            "commensurability",
            "M1/M2 = N1/N2 fails: M1/M2 = " + format_rational(in.M1 / in.M2) +
                ", N1/N2 = " + format_rational(Rational(in.N1, in.N2)));

    GlueReport rep;
    rep.M1 = to_double(in.M1);
    rep.M2 = to_double(in.M2);
    rep.F1 = to_double(in.F1);
    rep.F2 = to_double(in.F2);
    rep.N1 = in.N1;
    rep.N2 = in.N2;
    rep.exponent = in.law.exponent();
    rep.gamma = static_cast<double>(in.N1) / static_cast<double>(in.N2);

    GlueSystem sys{rep.M1,
                   rep.M2,
                   rep.F1,
                   -rep.F2,
                   rep.M1 + rep.M2,
                   static_cast<int>(in.N1),
                   static_cast<int>(in.N2),
                   in.law};

    auto [m, infeasibility] = glue_least_squares(sys);
    rep.m1 = m[0];
    rep.m2 = m[1];
    rep.infeasibility = infeasibility;
    rep.infeasibility_rel = infeasibility / sys.L;

    // single matching-equation roots: segment 1 frozen at its arc length, the
    // second segment scaled through the mean-gap coupling
    auto u1 = solve_exact(SegmentProblem{sys.M1, sys.n1 + 2, sys.F1, in.law});
    auto edge_gap = [&](double mm, bool first) {
        double length = (sys.M1 + mm) * static_cast<double>(sys.n2 + 1) /
                        static_cast<double>(sys.n1 + 1);
        auto u2 = solve_exact(SegmentProblem{length, sys.n2 + 2, sys.F2abs, in.law});
        return first ? u2.first_gap() : u2.last_gap();
    };
    auto solve_matching = [&](bool first) {
        double target = first ? u1.first_gap() : u1.last_gap();
        auto h = [&](double mm) { return target - edge_gap(mm, first); };
        double lo = -0.5 * sys.M1, hi = 0.5 * sys.M1;
        int guard = 0;
        while (h(lo) <= 0.0 && ++guard < 20) lo = 0.5 * (lo - sys.M1 * 0.9);
        guard = 0;
        while (h(hi) >= 0.0 && ++guard < 20) hi *= 2.0;
        for (int it = 0; it < 110; ++it) {
            double mid = 0.5 * (lo + hi);
            if (h(mid) > 0.0)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    };
    rep.m_A = solve_matching(true);
    rep.m_B = solve_matching(false);

    const double a = in.law.exponent();
    const double ratio = static_cast<double>(sys.n1) / (sys.n1 + 1.0);
    const double M1_hat = sys.M1 + rep.m1;
    rep.index1 = 2.0 * rep.M1 / a;
    rep.index2 = 2.0 * rep.M2 / a;
    rep.c1 = -0.5 * rep.F1 * std::pow(M1_hat, a - 1.0) * std::pow(ratio, a);
    rep.c4 = -0.5 * rep.F1 / a * std::pow(M1_hat, a) * std::pow(ratio, a);
    rep.d1 = -0.5 * rep.F1 * std::pow(rep.M1, a - 1.0);
    rep.d4 = -0.5 * rep.F1 / a * std::pow(rep.M1, a);
    return rep;
}

RepairResult repair_gap_points(const Rational& L, const Rational& M,
                               const Rational& F1, const Rational& F2,
                               long long N1, long long N2,
                               const InteractionLaw& law) {
    if (!(Rational(0) < M && M < L))
        throw std::invalid_argument("split must lie strictly inside the circle");
    if (N1 < 3 || N2 < 3)
        throw std::invalid_argument("gap-point repair needs at least 3 particles per arc");

    const double Ld = to_double(L);
    const double Md = to_double(M);
    const double F1d = to_double(F1);
    const double F2d = to_double(F2);

    // negative force on an arc is solved in mirrored orientation
    auto arc_gaps = [&](double length, long long count, double force) {
        SegmentProblem p{length, static_cast<int>(count), std::abs(force), law};
        auto gaps = solve_exact(p).gaps;
        if (force < 0.0) std::reverse(gaps.begin(), gaps.end());
        return gaps;
    };
    auto g1 = arc_gaps(Md, N1 + 1, F1d);
    auto g2 = arc_gaps(Ld - Md, N2 + 1, F2d);

    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(N1 + N2));
    KahanSum walk;
    for (long long k = 0; k < N1; ++k) {
        walk.add(g1[static_cast<std::size_t>(k)]);
        xs.push_back(walk.value());
    }
    xs.back() = Md;  // the shared particle sits exactly on the breakpoint
    KahanSum walk2;
    walk2.add(Md);
    for (long long k = 0; k < N2; ++k) {
        walk2.add(g2[static_cast<std::size_t>(k)]);
        xs.push_back(walk2.value());
    }
    xs.back() = Ld;

    Configuration config(RingGeometry{Ld}, std::move(xs));
    const std::size_t n = config.size();
    const std::size_t at_split = static_cast<std::size_t>(N1) - 1;

    // override = f(gap after) - f(gap before), balancing the pinned particle
    double override_split = law.pair_force(config.gap_after(at_split)) -
                            law.pair_force(config.gap_after(at_split - 1));
    double override_origin = law.pair_force(config.gap_after(n - 1)) -
                             law.pair_force(config.gap_after(n - 2));

    PiecewiseForce field = PiecewiseForce::two_piece(L, M, F1, F2)
                               .with_override(0, override_split)
                               .with_override(1, override_origin);

    RepairResult out{field, config, override_split, override_origin,
                     residual(config, field, law)};
    return out;
}

}  // namespace ringeq
