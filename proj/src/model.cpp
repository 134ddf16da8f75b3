#include "ringeq/model.hpp"

#include <algorithm>

#include "ringeq/numerics.hpp"

namespace ringeq {

PiecewiseForce::PiecewiseForce(Rational circumference,
                               std::vector<Rational> breakpoints,
                               std::vector<Rational> values)
    : circumference_(circumference),
      breakpoints_(std::move(breakpoints)),
      values_(std::move(values)) {
    if (circumference_ <= Rational(0))
        throw std::invalid_argument("circumference must be positive");
    if (breakpoints_.empty() || breakpoints_.size() != values_.size())
        throw std::invalid_argument("need one value per piece");
    Rational prev(0);
    for (const auto& b : breakpoints_) {
        if (b <= prev)
            throw std::invalid_argument("breakpoints must be strictly increasing");
        prev = b;
    }
    if (breakpoints_.back() != circumference_)
        throw std::invalid_argument("last breakpoint must equal the circumference");

    circumference_d_ = to_double(circumference_);
    breakpoints_d_.reserve(breakpoints_.size());
    for (const auto& b : breakpoints_) breakpoints_d_.push_back(to_double(b));
    values_d_.reserve(values_.size());
    for (const auto& v : values_) values_d_.push_back(to_double(v));
}

PiecewiseForce PiecewiseForce::uniform(Rational circumference, Rational value) {
    return PiecewiseForce(circumference, {circumference}, {value});
}

PiecewiseForce PiecewiseForce::two_piece(Rational circumference, Rational split,
                                         Rational first, Rational second) {
    if (!(Rational(0) < split && split < circumference))
        throw std::invalid_argument("split must lie strictly inside the circle");
    return PiecewiseForce(circumference, {split, circumference}, {first, second});
}

int PiecewiseForce::piece_index(double x) const {
    if (!(x > 0.0 && x <= circumference_d_))
        throw std::domain_error("force evaluation outside (0, L]");
    auto it = std::lower_bound(breakpoints_d_.begin(), breakpoints_d_.end(), x);
    if (it == breakpoints_d_.end()) it = std::prev(breakpoints_d_.end());
    return static_cast<int>(it - breakpoints_d_.begin()) + 1;
}

double PiecewiseForce::operator()(double x) const {
    int j = piece_index(x);
    if (!overrides_.empty() && x == breakpoints_d_[j - 1]) {
        for (const auto& [idx, v] : overrides_)
            if (idx == static_cast<std::size_t>(j - 1)) return v;
    }
    return values_d_[j - 1];
}

Rational PiecewiseForce::circulation() const {
    Rational total(0);
    Rational prev(0);
    for (std::size_t j = 0; j < breakpoints_.size(); ++j) {
        total += values_[j] * (breakpoints_[j] - prev);
        prev = breakpoints_[j];
    }
    return total;
}

double PiecewiseForce::integral_to(double x) const {
    if (x == 0.0) return 0.0;
    int j = piece_index(x);
    double acc = 0.0;
    double prev = 0.0;
    for (int i = 0; i < j - 1; ++i) {
        acc += values_d_[i] * (breakpoints_d_[i] - prev);
        prev = breakpoints_d_[i];
    }
    return acc + values_d_[j - 1] * (x - prev);
}

PiecewiseForce PiecewiseForce::with_override(std::size_t breakpoint_index,
                                             double value) const {
    if (breakpoint_index >= breakpoints_.size())
        throw std::invalid_argument("override index out of range");
    PiecewiseForce out = *this;
    for (auto& [idx, v] : out.overrides_) {
        if (idx == breakpoint_index) {
            v = value;
            return out;
        }
    }
    out.overrides_.emplace_back(breakpoint_index, value);
    return out;
}

PiecewiseForce PiecewiseForce::without_overrides() const {
    PiecewiseForce out = *this;
    out.overrides_.clear();
    return out;
}

Configuration::Configuration(RingGeometry geometry, std::vector<double> positions)
    : geometry_(geometry), positions_(std::move(positions)) {
    const double L = geometry_.circumference;
    if (!(L > 0.0)) throw std::invalid_argument("circumference must be positive");
    if (positions_.size() < 2)
        throw std::invalid_argument("configuration needs at least two particles");
    double prev = 0.0;
    for (double x : positions_) {
        if (!(x > prev))
            throw std::invalid_argument("positions must be strictly increasing in (0, L]");
        prev = x;
    }
    if (!(positions_.back() <= L))
        throw std::invalid_argument("positions must lie in (0, L]");
}

double Configuration::gap_after(std::size_t i) const {
    if (i + 1 < positions_.size()) return positions_[i + 1] - positions_[i];
    return positions_.front() + geometry_.circumference - positions_.back();
}

GapVector to_gaps(const Configuration& config) {
    GapVector out;
    out.geometry = config.geometry();
    out.anchor = config[0];
    out.gaps.resize(config.size());
    for (std::size_t i = 0; i < config.size(); ++i) out.gaps[i] = config.gap_after(i);
    return out;
}

Configuration from_gaps(const GapVector& gaps) {
    const double L = gaps.geometry.circumference;
    const std::size_t n = gaps.gaps.size();
    if (n < 2) throw std::invalid_argument("gap vector needs at least two gaps");
    for (double g : gaps.gaps)
        if (!(g > 0.0)) throw std::invalid_argument("gaps must be positive");
    KahanSum sum;
    for (double g : gaps.gaps) sum.add(g);
    if (std::abs(sum.value() - L) > 1e-12 * L)
        throw std::invalid_argument("gaps must sum to the circumference");
    // anchor is x_1, so it cannot exceed the wrap gap x_1 + L - x_N
    if (!(gaps.anchor > 0.0) || gaps.anchor > gaps.gaps.back() + 1e-12 * L)
        throw std::invalid_argument("anchor must lie in (0, wrap gap]");

    std::vector<double> xs(n);
    KahanSum walk;
    walk.add(gaps.anchor);
    xs[0] = gaps.anchor;
    for (std::size_t i = 1; i < n; ++i) {
        walk.add(gaps.gaps[i - 1]);
        xs[i] = walk.value();
    }
    // the wrap gap absorbs rounding; clip the tail into (0, L]
    if (xs.back() > L) xs.back() = L;
    return Configuration(gaps.geometry, std::move(xs));
}

ResidualVector residual(const Configuration& config, const PiecewiseForce& field,
                        const InteractionLaw& law) {
    const std::size_t n = config.size();
    ResidualVector out;
    out.values.resize(n);
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) {
        f[i] = law.pair_force(config.gap_after(i));
        out.force_scale = std::max(out.force_scale, f[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        double f_before = f[(i + n - 1) % n];
        out.values[i] = f_before + field(config[i]) - f[i];
        out.inf_norm = std::max(out.inf_norm, std::abs(out.values[i]));
    }
    return out;
}

double energy(const Configuration& config, const PiecewiseForce& field,
              const InteractionLaw& law) {
    if (field.circulation() != Rational(0))
        throw std::domain_error(
            "energy undefined: field has nonzero circulation on the circle");
    KahanSum e;
    for (std::size_t i = 0; i < config.size(); ++i)
        e.add(law.pair_potential(config.gap_after(i)));
    // external potential: -integral of F, so that -dE/dx_k reproduces the
    // residual with the clockwise-positive sign convention
    for (double x : config.positions()) e.add(-field.integral_to(x));
    return e.value();
}

ForceSum force_sum(const Configuration& config, const PiecewiseForce& field) {
    ForceSum out;
    out.counts.assign(field.piece_count(), 0);
    KahanSum total;
    for (double x : config.positions()) {
        total.add(field(x));
        out.counts[static_cast<std::size_t>(field.piece_index(x)) - 1] += 1;
    }
    out.total = total.value();
    return out;
}

}  // namespace ringeq
