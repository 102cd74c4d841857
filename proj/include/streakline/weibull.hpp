#pragma once

// Translated three-parameter Weibull distribution for run counts.
//
//   f(x) = (shape/scale) * ((x - location)/scale)^(shape-1) * exp(-((x - location)/scale)^shape),  x >= location
//   F(x) = 1 - exp(-((x - location)/scale)^shape)
//
// Run counts are discrete, so P(r) = F(r + 1) - F(r). Parameters are fitted by
// least squares against an empirical run distribution over r = 0..30.

#include "streakline/core.hpp"
#include "streakline/nelder_mead.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

namespace streakline {

struct WeibullParams {
    double scale = 1.0;
    double location = 0.0;
    double shape = 1.0;

    friend bool operator==(const WeibullParams&, const WeibullParams&) = default;
};

inline bool is_valid(const WeibullParams& p) noexcept {
    return std::isfinite(p.scale) && std::isfinite(p.location) && std::isfinite(p.shape) && p.scale > 0.0 &&
           p.shape > 0.0;
}

inline void validate(const WeibullParams& p) {
    if (!is_valid(p)) {
        throw Error(ErrorKind::InvalidParams, "Weibull parameters need finite values with scale > 0 and shape > 0");
    }
}

namespace detail {

inline double weibull_cdf_unchecked(double x, const WeibullParams& p) noexcept {
    if (x <= p.location) return 0.0;
    return -std::expm1(-std::pow((x - p.location) / p.scale, p.shape));
}

}  // namespace detail

inline double pdf(double x, const WeibullParams& p) {
    validate(p);
    if (x < p.location) return 0.0;
    const double z = (x - p.location) / p.scale;
    return (p.shape / p.scale) * std::pow(z, p.shape - 1.0) * std::exp(-std::pow(z, p.shape));
}

inline double cdf(double x, const WeibullParams& p) {
    validate(p);
    return detail::weibull_cdf_unchecked(x, p);
}

inline double discrete_pmf(int r, const WeibullParams& p) {
    if (r < 0) {
        throw Error(ErrorKind::NegativeRun, "run count must be non-negative, got " + std::to_string(r));
    }
    validate(p);
    // F(r+1) - F(r) written as a difference of survival terms keeps precision in the tail.
    const auto survival_log = [&](double x) {
        return x <= p.location ? 0.0 : -std::pow((x - p.location) / p.scale, p.shape);
    };
    const double a = survival_log(r), b = survival_log(r + 1.0);
    return std::exp(a) * -std::expm1(b - a);
}

// ---------------------------------------------------------------------------
// Empirical run distribution
// ---------------------------------------------------------------------------

inline constexpr int kMaxTrackedRuns = 30;

/// Observed run frequencies for r = 0..30.
///
/// Built from counts, entries sum to 1 and scores above 30 are folded into r = 30.
/// `from_probabilities` also accepts a sub-normalized vector (sum <= 1), which is
/// how a sample of the continuous model looks once mass below zero runs is lost.
class EmpiricalRunPmf {
public:
    static constexpr std::size_t kSize = kMaxTrackedRuns + 1;
    using Array = std::array<double, kSize>;

    EmpiricalRunPmf() = default;

    static EmpiricalRunPmf from_counts(std::span<const long> counts_by_runs) {
        EmpiricalRunPmf out;
        long total = 0;
        std::array<long, kSize> folded{};
        for (std::size_t r = 0; r < counts_by_runs.size(); ++r) {
            const long c = counts_by_runs[r];
            if (c < 0) throw Error(ErrorKind::InvalidParams, "negative count");
            folded[std::min(r, kSize - 1)] += c;
            if (r >= kSize) out.folded_ += c;
            total += c;
        }
        if (total == 0) throw Error(ErrorKind::EmptyInput, "no observations for the run distribution");
        for (std::size_t r = 0; r < kSize; ++r) out.probs_[r] = static_cast<double>(folded[r]) / static_cast<double>(total);
        out.observations_ = total;
        return out;
    }

    static EmpiricalRunPmf from_runs(std::span<const int> runs) {
        std::vector<long> counts;
        for (int r : runs) {
            if (r < 0) throw Error(ErrorKind::NegativeRun, "negative run count");
            if (static_cast<std::size_t>(r) >= counts.size()) counts.resize(static_cast<std::size_t>(r) + 1, 0);
            ++counts[static_cast<std::size_t>(r)];
        }
        return from_counts(counts);
    }

    static EmpiricalRunPmf from_probabilities(const Array& probs) {
        double sum = 0.0;
        for (double v : probs) {
            if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorKind::InvalidParams, "probability outside [0, 1]");
            sum += v;
        }
        if (sum > 1.0 + 1e-9) throw Error(ErrorKind::InvalidParams, "probabilities sum above 1");
        EmpiricalRunPmf out;
        out.probs_ = probs;
        return out;
    }

    [[nodiscard]] const Array& probs() const noexcept { return probs_; }
    [[nodiscard]] double operator[](std::size_t r) const { return probs_.at(r); }
    /// Observations above 30 runs that were folded into the last bin.
    [[nodiscard]] long folded() const noexcept { return folded_; }
    [[nodiscard]] long observations() const noexcept { return observations_; }

    [[nodiscard]] double total() const noexcept { return std::accumulate(probs_.begin(), probs_.end(), 0.0); }

    [[nodiscard]] double mean() const noexcept {
        double m = 0.0;
        for (std::size_t r = 0; r < kSize; ++r) m += static_cast<double>(r) * probs_[r];
        return m / total();
    }

    [[nodiscard]] double std_dev() const noexcept {
        const double m = mean();
        double v = 0.0;
        for (std::size_t r = 0; r < kSize; ++r) v += (static_cast<double>(r) - m) * (static_cast<double>(r) - m) * probs_[r];
        return std::sqrt(v / total());
    }

private:
    Array probs_{};
    long folded_ = 0;
    long observations_ = 0;
};

/// Sum of squared deviations between the discretized model and the observed pmf over r = 0..30.
inline double objective(const WeibullParams& p, const EmpiricalRunPmf& emp) {
    validate(p);
    double s = 0.0;
    for (int r = 0; r <= kMaxTrackedRuns; ++r) {
        const double d = discrete_pmf(r, p) - emp[static_cast<std::size_t>(r)];
        s += d * d;
    }
    return s;
}

struct FitOptions {
    double tol = 1e-10;
    std::size_t max_evaluations = 10'000;  // per simplex run
    int restarts = 5;                      // perturbed starts in addition to the initial guess
};

struct FitResult {
    WeibullParams params;
    double objective = 0.0;
    double initial_objective = 0.0;
    bool converged = false;
    std::size_t evaluations = 0;
};

/// Starting point: scale = observed std dev, location = -0.5, shape = 1.7.
inline WeibullParams default_initial_guess(const EmpiricalRunPmf& emp) {
    const double sd = emp.std_dev();
    return {std::isfinite(sd) && sd > 0.1 ? sd : 1.0, -0.5, 1.7};
}

/// Least-squares fit by Nelder-Mead in (log scale, location, log shape).
///
/// The initial guess is one vertex of the first simplex, so the returned objective
/// never exceeds objective(init). Failing to converge is reported, not thrown.
inline FitResult fit(const EmpiricalRunPmf& emp, const WeibullParams& init, const FitOptions& opts = {}) {
    if (!is_valid(init)) {
        throw Error(ErrorKind::InvalidInit, "initial Weibull parameters are invalid");
    }
    using Point = std::array<double, 3>;
    auto to_params = [](const Point& u) { return WeibullParams{std::exp(u[0]), u[1], std::exp(u[2])}; };
    auto f = [&](const Point& u) {
        const WeibullParams p = to_params(u);
        if (!is_valid(p)) return std::numeric_limits<double>::infinity();
        return objective(p, emp);
    };

    const Point u0{std::log(init.scale), init.location, std::log(init.shape)};
    const Point step{0.25, 0.25, 0.25};
    const SimplexOptions simplex{opts.tol, opts.max_evaluations};

    FitResult out;
    out.params = init;
    out.initial_objective = objective(init, emp);
    out.objective = out.initial_objective;

    auto consider = [&](const SimplexResult<3>& r) {
        out.evaluations += r.evaluations;
        out.converged = out.converged || r.converged;
        if (r.value < out.objective) {
            out.objective = r.value;
            out.params = to_params(r.x);
        }
    };

    consider(nelder_mead(f, u0, step, simplex));

    // Deterministic perturbations of the initial guess.
    static constexpr std::array<Point, 5> kOffsets{{
        {0.5, 0.0, 0.0},
        {-0.5, 0.3, 0.0},
        {0.0, -0.4, 0.4},
        {0.3, 0.2, -0.4},
        {-0.3, -0.2, 0.6},
    }};
    for (int i = 0; i < opts.restarts; ++i) {
        const auto& d = kOffsets[static_cast<std::size_t>(i) % kOffsets.size()];
        const double spread = 1.0 + static_cast<double>(i / static_cast<int>(kOffsets.size()));
        Point start;
        for (std::size_t k = 0; k < 3; ++k) start[k] = u0[k] + spread * d[k];
        consider(nelder_mead(f, start, step, simplex));
    }

    // Polish from the best point with a fresh, small simplex.
    const Point best{std::log(out.params.scale), out.params.location, std::log(out.params.shape)};
    consider(nelder_mead(f, best, Point{0.01, 0.01, 0.01}, simplex));
    return out;
}

inline FitResult fit(const EmpiricalRunPmf& emp, const FitOptions& opts = {}) {
    return fit(emp, default_initial_guess(emp), opts);
}

}  // namespace streakline
