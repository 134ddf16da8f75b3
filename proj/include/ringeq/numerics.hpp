// Small numeric kernels shared across the library: compensated summation,
// safeguarded 1-D root finding on a bracket, and the banded linear solve
// used by the cyclic-chain Newton iteration.
#ifndef RINGEQ_NUMERICS_HPP
#define RINGEQ_NUMERICS_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace ringeq {

// Neumaier-compensated accumulator. Keeps long gap sums accurate to a few
// ulp independent of N, which the 1e-13..1e-14 length contracts require.
class KahanSum {
  public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) {
    KahanSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

struct RootResult {
    double x;
    double fx;
    int iterations;
};

// Bracketed root of a monotone function: bisection steps interleaved with
// Newton refinements that are accepted only while they stay inside the
// bracket. fdf returns (f, f'). Requires f(lo) <= 0 <= f(hi).
inline RootResult find_root_bracketed(
    const std::function<std::pair<double, double>(double)>& fdf, double lo,
    double hi, double f_tol, int max_iter = 200) {
    auto [flo, dlo] = fdf(lo);
    if (std::abs(flo) <= f_tol) return {lo, flo, 0};
    auto [fhi, dhi] = fdf(hi);
    if (std::abs(fhi) <= f_tol) return {hi, fhi, 0};
    if (flo > 0.0 || fhi < 0.0)
        throw std::invalid_argument("find_root_bracketed: root not bracketed");

    double x = 0.5 * (lo + hi);
    for (int it = 1; it <= max_iter; ++it) {
        auto [fx, dfx] = fdf(x);
        if (std::abs(fx) <= f_tol) return {x, fx, it};
        if (fx < 0.0)
            lo = x;
        else
            hi = x;
        double next = x;
        if (dfx != 0.0) next = x - fx / dfx;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == x) {
            // bracket exhausted at machine resolution
            next = 0.5 * (lo + hi);
            if (next == x) return {x, fx, it};
        }
        x = next;
    }
    auto [fx, dfx] = fdf(x);
    return {x, fx, max_iter};
}

// Tridiagonal solve (Thomas). diag/rhs are overwritten internally; bands are
// lower[i] = A[i][i-1], upper[i] = A[i][i+1].
inline std::vector<double> solve_tridiagonal(std::vector<double> lower,
                                             std::vector<double> diag,
                                             std::vector<double> upper,
                                             std::vector<double> rhs) {
    const std::size_t n = diag.size();
    if (n == 0) return {};
    for (std::size_t i = 1; i < n; ++i) {
        double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    std::vector<double> x(n);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
    return x;
}

// Tridiagonal plus the two corner entries A[0][n-1] = corner_ur and
// A[n-1][0] = corner_ll, folded in by a rank-one update (Sherman-Morrison).
// This is the reduced Jacobian of the cyclic chain after one coordinate is
// pinned; with pin index 0 both corners vanish and plain Thomas applies.
inline std::vector<double> solve_tridiagonal_with_corners(
    const std::vector<double>& lower, std::vector<double> diag,
    const std::vector<double>& upper, const std::vector<double>& rhs,
    double corner_ur, double corner_ll) {
    const std::size_t n = diag.size();
    if (corner_ur == 0.0 && corner_ll == 0.0)
        return solve_tridiagonal(lower, std::move(diag), upper, rhs);
    if (n < 2)
        throw std::invalid_argument("corner solve needs n >= 2");

    double gamma = -diag[0];
    if (gamma == 0.0) gamma = 1.0;
    // A = T + u v^T with u = (gamma, 0..0, corner_ll), v = (1, 0..0, corner_ur/gamma)
    diag[0] -= gamma;
    diag[n - 1] -= corner_ll * corner_ur / gamma;

    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = corner_ll;

    auto y = solve_tridiagonal(lower, diag, upper, rhs);
    auto z = solve_tridiagonal(lower, diag, upper, u);

    double vy = y[0] + corner_ur / gamma * y[n - 1];
    double vz = z[0] + corner_ur / gamma * z[n - 1];
    double factor = vy / (1.0 + vz);
    for (std::size_t i = 0; i < n; ++i) y[i] -= factor * z[i];
    return y;
}

// Least-squares slope of y against x.
inline double fit_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_slope: need >= 2 points");
    double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace ringeq

#endif
