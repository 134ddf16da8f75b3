// Core domain types for point particles with power-law repulsion on a circle
// under a piecewise-constant external force: the interaction law, the force
// field, configurations and their gap representation, equilibrium residuals,
// and the total energy.
#ifndef RINGEQ_MODEL_HPP
#define RINGEQ_MODEL_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ringeq/rational.hpp"

namespace ringeq {

// Pair law f(r) = r^-a with potential V(r) = r^(1-a)/(a-1), a > 1.
// The normalization alpha*(a-1) = 1 is hard-wired.
class InteractionLaw {
  public:
    explicit InteractionLaw(double exponent) : exponent_(exponent) {
        if (!(exponent > 1.0))
            throw std::invalid_argument("interaction exponent must satisfy a > 1");
    }

    double exponent() const { return exponent_; }

    double pair_force(double r) const {
        if (!(r > 0.0))
            throw std::domain_error("pair_force: separation must be positive");
        return std::pow(r, -exponent_);
    }

    double pair_potential(double r) const {
        if (!(r > 0.0))
            throw std::domain_error("pair_potential: separation must be positive");
        return std::pow(r, 1.0 - exponent_) / (exponent_ - 1.0);
    }

    // d f / d r = -a r^-(a+1), always negative.
    double force_slope(double r) const {
        if (!(r > 0.0))
            throw std::domain_error("force_slope: separation must be positive");
        return -exponent_ * std::pow(r, -exponent_ - 1.0);
    }

  private:
    double exponent_;
};

struct RingGeometry {
    double circumference = 1.0;
};

// Left-continuous piecewise-constant force on the circle. Breakpoints and
// piece values are exact rationals; optional point overrides at breakpoints
// carry double values (they are created by the gap-point repair, which
// balances particles pinned at breakpoints, and have measure zero).
//
// Evaluation domain is (0, L]: a point exactly at a breakpoint takes the
// value of the piece ending there unless overridden. Positive force points
// clockwise (increasing coordinate).
class PiecewiseForce {
  public:
    PiecewiseForce(Rational circumference, std::vector<Rational> breakpoints,
                   std::vector<Rational> values);

    static PiecewiseForce uniform(Rational circumference, Rational value);
    static PiecewiseForce two_piece(Rational circumference, Rational split,
                                    Rational first, Rational second);

    double operator()(double x) const;

    // Exact integral over the circle; overrides do not contribute.
    Rational circulation() const;

    // Integral of the force from 0 to x (piecewise linear in x).
    double integral_to(double x) const;

    // 1-based piece index whose half-open arc (b_{j-1}, b_j] contains x.
    int piece_index(double x) const;

    std::size_t piece_count() const { return values_.size(); }
    double circumference() const { return circumference_d_; }
    Rational circumference_exact() const { return circumference_; }
    const std::vector<Rational>& breakpoints() const { return breakpoints_; }
    const std::vector<Rational>& values() const { return values_; }
    double breakpoint_at(std::size_t j) const { return breakpoints_d_[j]; }
    double value_at(std::size_t j) const { return values_d_[j]; }

    PiecewiseForce with_override(std::size_t breakpoint_index, double value) const;
    PiecewiseForce without_overrides() const;
    const std::vector<std::pair<std::size_t, double>>& overrides() const {
        return overrides_;
    }

  private:
    Rational circumference_;
    std::vector<Rational> breakpoints_;  // b_1 < ... < b_m = L (b_0 = 0 implicit)
    std::vector<Rational> values_;       // one per piece
    std::vector<std::pair<std::size_t, double>> overrides_;  // breakpoint idx -> value

    double circumference_d_;
    std::vector<double> breakpoints_d_;
    std::vector<double> values_d_;
};

// N ordered particle positions on the circle, strictly increasing in (0, L].
// Indices are cyclic: x_{N+1} = x_1 + L, x_0 = x_N - L.
class Configuration {
  public:
    Configuration(RingGeometry geometry, std::vector<double> positions);

    const RingGeometry& geometry() const { return geometry_; }
    double circumference() const { return geometry_.circumference; }
    const std::vector<double>& positions() const { return positions_; }
    std::size_t size() const { return positions_.size(); }
    double operator[](std::size_t i) const { return positions_[i]; }

    // Clockwise gap after particle i; gap N-1 wraps through L.
    double gap_after(std::size_t i) const;

  private:
    RingGeometry geometry_;
    std::vector<double> positions_;
};

// Cyclic gap representation: anchor = x_1 and the N clockwise gaps.
struct GapVector {
    RingGeometry geometry;
    double anchor = 0.0;
    std::vector<double> gaps;
};

GapVector to_gaps(const Configuration& config);
Configuration from_gaps(const GapVector& gaps);

struct ResidualVector {
    std::vector<double> values;
    double inf_norm = 0.0;
    // max_k f(gap_k); f diverges at small gaps, so tolerances are usually
    // stated relative to this scale.
    double force_scale = 0.0;
    double relative_inf_norm() const {
        return force_scale > 0.0 ? inf_norm / force_scale : inf_norm;
    }
};

// r_k = f(x_k - x_{k-1}) + F(x_k) - f(x_{k+1} - x_k) with cyclic neighbors.
ResidualVector residual(const Configuration& config, const PiecewiseForce& field,
                        const InteractionLaw& law);

// Sum of pair potentials plus the external potential, whose negative gradient
// with respect to positions is exactly the residual vector. Requires zero
// circulation (otherwise the external potential is not single-valued).
double energy(const Configuration& config, const PiecewiseForce& field,
              const InteractionLaw& law);

struct ForceSum {
    double total = 0.0;
    std::vector<int> counts;  // particles per piece
    int first() const { return counts.empty() ? 0 : counts.front(); }
    int second() const { return counts.size() < 2 ? 0 : counts[1]; }
};

// Sum of F(x_i) with per-piece particle counts; vanishing total is the
// summed form of the equilibrium equations.
ForceSum force_sum(const Configuration& config, const PiecewiseForce& field);

}  // namespace ringeq

#endif
