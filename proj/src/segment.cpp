#include "ringeq/segment.hpp"

#include <cmath>
#include <stdexcept>

#include "ringeq/numerics.hpp"

namespace ringeq {

namespace {

void validate(const SegmentProblem& p) {
    if (!(p.length > 0.0)) throw std::invalid_argument("segment length must be positive");
    if (p.count < 3)
        throw std::invalid_argument("segment needs at least 3 points (one interior)");
    if (p.force < 0.0)
        throw std::invalid_argument(
            "segment force must be >= 0 (reverse orientation for negative forces)");
}

// Length defect S(g1) and dS/dg1. The ladder terms are
//   gap_k(g1) = (g1^-a + (k-1) F)^(-1/a).
std::pair<double, double> length_defect(const SegmentProblem& p, double g1) {
    const double a = p.law.exponent();
    const double t = std::pow(g1, -a);
    KahanSum sum;
    double deriv = 0.0;
    for (int k = 0; k < p.count - 1; ++k) {
        double base = t + static_cast<double>(k) * p.force;
        double gap = std::pow(base, -1.0 / a);
        sum.add(gap);
        deriv += std::pow(base, -1.0 / a - 1.0);
    }
    deriv *= std::pow(g1, -a - 1.0);
    return {sum.value() - p.length, deriv};
}

SegmentSolution finish(const SegmentProblem& p, double g1) {
    const double a = p.law.exponent();
    const double t = std::pow(g1, -a);
    const double mean = p.length / static_cast<double>(p.count - 1);

    SegmentSolution sol;
    sol.problem = p;
    sol.step = std::pow(mean, a) * p.force;
    sol.gaps.resize(p.count - 1);
    sol.deviations.resize(p.count - 1);
    for (int k = 0; k < p.count - 1; ++k) {
        sol.gaps[k] = std::pow(t + static_cast<double>(k) * p.force, -1.0 / a);
        sol.deviations[k] = sol.gaps[k] / mean - 1.0;
    }
    // interior balance: f(gap_{k-1}) + F - f(gap_k), k = 2..N-1
    for (int k = 1; k < p.count - 1; ++k) {
        double r = p.law.pair_force(sol.gaps[k - 1]) + p.force -
                   p.law.pair_force(sol.gaps[k]);
        sol.residual_norm = std::max(sol.residual_norm, std::abs(r));
    }
    return sol;
}

}  // namespace

namespace detail {

SegmentSolution solve_exact_bracketed(const SegmentProblem& p, double lo, double hi) {
    validate(p);
    const double tol = 1e-13 * p.length;
    auto fdf = [&](double g) { return length_defect(p, g); };
    auto root = find_root_bracketed(fdf, lo, hi, tol);
    if (std::abs(root.fx) > tol)
        throw std::runtime_error("segment solve did not reach the length tolerance");
    return finish(p, root.x);
}

}  // namespace detail

SegmentSolution solve_exact(const SegmentProblem& p) {
    validate(p);
    const double mean = p.length / static_cast<double>(p.count - 1);

    // The first gap is the largest, so the mean gap is a lower bracket for
    // F >= 0; expand downward geometrically if that ever fails.
    double lo = mean;
    if (length_defect(p, lo).first > 0.0) {
        lo = mean / 10.0;
        int guard = 0;
        while (length_defect(p, lo).first > 0.0) {
            lo *= 0.5;
            if (++guard > 200)
                throw std::runtime_error("segment solve failed to bracket from below");
        }
    }
    double hi = p.length;
    int guard = 0;
    while (length_defect(p, hi).first < 0.0) {
        hi *= 2.0;
        if (++guard > 64)
            throw std::runtime_error("segment solve failed to bracket from above");
    }
    return detail::solve_exact_bracketed(p, lo, hi);
}

DeltaExpansion perturbative_deltas(const SegmentProblem& p) {
    validate(p);
    const double a_inv = 1.0 / p.law.exponent();
    const double n = static_cast<double>(p.count);
    const double mean = p.length / (n - 1.0);
    const double q = std::pow(mean, p.law.exponent()) * p.force;
    const double linear = a_inv * q * (0.5 * n - 1.0);
    const double quadratic =
        a_inv * (a_inv + 1.0) / 12.0 * q * q * (n - 2.0) * (n - 3.0);
    return {linear + quadratic, -linear + quadratic};
}

bool endpoint_feasibility(const SegmentSolution& sol, double force_at_0,
                          double force_at_length) {
    const auto& law = sol.problem.law;
    return force_at_0 - law.pair_force(sol.first_gap()) <= 0.0 &&
           force_at_length + law.pair_force(sol.last_gap()) >= 0.0;
}

}  // namespace ringeq
