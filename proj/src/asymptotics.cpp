#include "ringeq/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "ringeq/circle.hpp"
#include "ringeq/existence.hpp"
#include "ringeq/numerics.hpp"
#include "ringeq/segment.hpp"

namespace ringeq {

namespace {

SweepRow sweep_row(double L, double F, const InteractionLaw& law, long long N) {
    auto build = construct_symmetric_detailed(
        SymmetricSpec{L, F, N, law, std::nullopt});
    auto gaps = to_gaps(build.config).gaps;
    SweepRow row;
    row.count = N;
    double two = 0.0;
    for (double g : gaps) {
        double dev = static_cast<double>(N) * g / L - 1.0;
        row.deviation_inf = std::max(row.deviation_inf, std::abs(dev));
        two += dev * dev;
    }
    row.deviation_two = std::sqrt(two);

    // prediction from the two-term edge expansion of the half segment
    auto expansion = perturbative_deltas(build.half.problem);
    double mean = build.half.problem.length /
                  static_cast<double>(build.half.problem.count - 1);
    double predicted_gap = mean * (1.0 + expansion.first);
    row.predicted = std::abs(static_cast<double>(N) * predicted_gap / L - 1.0);
    return row;
}

}  // namespace

SweepResult uniformity_sweep(const Rational& L, const Rational& F,
                             const InteractionLaw& law,
                             const std::vector<long long>& counts,
                             int threads) {
    if (counts.size() < 2)
        throw std::invalid_argument("sweep needs at least two counts");
    const double Ld = to_double(L);
    const double Fd = to_double(F);

    if (F == Rational(0)) {
        // zero force: equidistant for every N, deviation at rounding level
        SweepResult out;
        for (long long N : counts) {
            std::vector<double> gaps(static_cast<std::size_t>(N),
                                     Ld / static_cast<double>(N));
            Configuration config = from_gaps(
                GapVector{RingGeometry{Ld}, gaps[0], gaps});
            SweepRow row;
            row.count = N;
            for (std::size_t k = 0; k < config.size(); ++k) {
                double dev = static_cast<double>(N) * config.gap_after(k) / Ld - 1.0;
                row.deviation_inf = std::max(row.deviation_inf, std::abs(dev));
                row.deviation_two += dev * dev;
            }
            row.deviation_two = std::sqrt(row.deviation_two);
            out.rows.push_back(row);
        }
        std::sort(out.rows.begin(), out.rows.end(),
                  [](const SweepRow& a, const SweepRow& b) { return a.count < b.count; });
        return out;
    }

    for (long long N : counts) {
        auto v = verdict(L, L / Rational(2), F, -F, N, law);
        if (v.kind != VerdictKind::ConstructibleSymmetric)
            throw std::invalid_argument(
                "sweep count " + std::to_string(N) +
                " is not constructible: " + std::string(to_string(v.kind)));
    }

    SweepResult out;
    out.rows.resize(counts.size());
    if (threads <= 1) {
        for (std::size_t i = 0; i < counts.size(); ++i)
            out.rows[i] = sweep_row(Ld, Fd, law, counts[i]);
    } else {
        std::vector<std::thread> pool;
        std::size_t next = 0;
        const std::size_t stride =
            (counts.size() + static_cast<std::size_t>(threads) - 1) /
            static_cast<std::size_t>(threads);
        for (int t = 0; t < threads && next < counts.size(); ++t) {
            std::size_t begin = next;
            std::size_t end = std::min(counts.size(), begin + stride);
            next = end;
            pool.emplace_back([&, begin, end] {
                for (std::size_t i = begin; i < end; ++i)
                    out.rows[i] = sweep_row(Ld, Fd, law, counts[i]);
            });
        }
        for (auto& th : pool) th.join();
    }
    std::sort(out.rows.begin(), out.rows.end(),
              [](const SweepRow& a, const SweepRow& b) { return a.count < b.count; });

    std::vector<double> lx, ly;
    for (std::size_t i = 2; i < out.rows.size(); ++i) {
        lx.push_back(std::log(static_cast<double>(out.rows[i].count)));
        ly.push_back(std::log(out.rows[i].deviation_inf));
    }
    out.slope = lx.size() >= 2 ? fit_slope(lx, ly) : 0.0;
    return out;
}

FineScaleReport fine_scale_report(const Configuration& config,
                                  const PiecewiseForce& field,
                                  const InteractionLaw& law) {
    auto res = residual(config, field, law);
    if (res.relative_inf_norm() > 1e-8)
        throw std::invalid_argument(
            "fine-scale profile requires an equilibrium (relative residual above 1e-8)");

    const double L = config.circumference();
    const auto N = static_cast<double>(config.size());
    FineScaleReport out;
    out.rows.resize(config.size());

    // edge prediction from the dominant per-arc segment: for the two-piece
    // field each arc carries about half the particles
    double predicted = 0.0;
    if (field.piece_count() == 2) {
        double F_arc = std::abs(field.value_at(0));
        int seg_count = static_cast<int>(config.size() / 2) + 2;
        double seg_len = field.breakpoint_at(0);
        if (seg_len > 0.0 && seg_count >= 3 && F_arc > 0.0) {
            auto exp_edge = perturbative_deltas(
                SegmentProblem{seg_len, seg_count, F_arc, law});
            predicted = std::abs(exp_edge.first);
        }
    }

    KahanSum dev_sum;
    for (std::size_t k = 0; k < config.size(); ++k) {
        double g = config.gap_after(k);
        double dev = N * g / L - 1.0;
        out.rows[k] = {k, g, dev, predicted};
        out.max_deviation = std::max(out.max_deviation, std::abs(dev));
        dev_sum.add(dev);
    }
    out.deviation_sum = dev_sum.value();
    out.imprint_scale = (L / N) * out.max_deviation;
    return out;
}

}  // namespace ringeq
