#pragma once

// Derivative-free Nelder-Mead simplex minimizer over a fixed-size parameter vector.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>

namespace streakline {

template <std::size_t N>
struct SimplexResult {
    std::array<double, N> x{};
    double value = std::numeric_limits<double>::infinity();
    std::size_t evaluations = 0;
    bool converged = false;
};

struct SimplexOptions {
    double tol = 1e-10;  // simplex diameter (max-norm distance to the best vertex)
    std::size_t max_evaluations = 10'000;
};

/// Minimizes `f` starting from a simplex spanned by `x0` and `x0 + step[i] * e_i`.
/// Non-finite function values are treated as +infinity.
template <std::size_t N, typename F>
SimplexResult<N> nelder_mead(F&& f, const std::array<double, N>& x0, const std::array<double, N>& step,
                             const SimplexOptions& opts = {}) {
    using Point = std::array<double, N>;
    constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;

    SimplexResult<N> result;
    auto eval = [&](const Point& p) {
        ++result.evaluations;
        const double v = f(p);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };

    std::array<Point, N + 1> pts;
    std::array<double, N + 1> vals;
    pts[0] = x0;
    vals[0] = eval(x0);
    for (std::size_t i = 0; i < N; ++i) {
        pts[i + 1] = x0;
        pts[i + 1][i] += step[i];
        vals[i + 1] = eval(pts[i + 1]);
    }

    std::array<std::size_t, N + 1> order;
    auto affine = [](const Point& a, const Point& b, double t) {
        Point p;
        for (std::size_t i = 0; i < N; ++i) p[i] = a[i] + t * (b[i] - a[i]);
        return p;
    };

    for (;;) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        const std::size_t best = order.front(), worst = order.back(), second = order[N - 1];

        double diameter = 0.0;
        for (std::size_t v = 0; v <= N; ++v) {
            for (std::size_t i = 0; i < N; ++i) diameter = std::max(diameter, std::abs(pts[v][i] - pts[best][i]));
        }
        if (diameter < opts.tol) {
            result.converged = true;
            break;
        }
        if (result.evaluations >= opts.max_evaluations) break;

        Point centroid{};
        for (std::size_t v = 0; v <= N; ++v) {
            if (v == worst) continue;
            for (std::size_t i = 0; i < N; ++i) centroid[i] += pts[v][i] / static_cast<double>(N);
        }

        const Point reflected = affine(centroid, pts[worst], -kReflect);
        const double fr = eval(reflected);
        if (fr < vals[best]) {
            const Point expanded = affine(centroid, pts[worst], -kExpand);
            const double fe = eval(expanded);
            if (fe < fr) {
                pts[worst] = expanded;
                vals[worst] = fe;
            } else {
                pts[worst] = reflected;
                vals[worst] = fr;
            }
            continue;
        }
        if (fr < vals[second]) {
            pts[worst] = reflected;
            vals[worst] = fr;
            continue;
        }
        const bool outside = fr < vals[worst];
        const Point contracted = outside ? affine(centroid, reflected, kContract) : affine(centroid, pts[worst], kContract);
        const double fc = eval(contracted);
        if (outside ? fc <= fr : fc < vals[worst]) {
            pts[worst] = contracted;
            vals[worst] = fc;
            continue;
        }
        for (std::size_t v = 0; v <= N; ++v) {
            if (v == best) continue;
            pts[v] = affine(pts[best], pts[v], kShrink);
            vals[v] = eval(pts[v]);
        }
    }

    const auto best = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
    result.x = pts[best];
    result.value = vals[best];
    return result;
}

}  // namespace streakline
