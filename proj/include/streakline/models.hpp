#pragma once

// Score generators for simulated games.
//
// SimpleWeibullModel draws home and away runs independently from two discretized
// Weibull marginals and redraws the whole pair on a tie.
//
// BivariateScoreModel splits the score grid into diagonals k = home - away (k != 0).
// A game draws k from the historical diagonal weights, then the away score from that
// diagonal's distribution truncated to scores that stay inside 0..max_runs.

#include "streakline/core.hpp"
#include "streakline/random.hpp"
#include "streakline/weibull.hpp"

#include <cstdlib>
#include <map>
#include <optional>
#include <variant>
#include <vector>

namespace streakline {

struct ScorePair {
    int home_runs = 0;
    int away_runs = 0;

    friend bool operator==(const ScorePair&, const ScorePair&) = default;
};

inline constexpr int kDefaultMaxRuns = 30;
inline constexpr long kTieRejectionLimit = 1'000'000;

/// Discretized Weibull restricted to lo..hi runs and renormalized; index i is run lo + i.
inline std::vector<double> truncated_pmf(const WeibullParams& p, int lo, int hi) {
    std::vector<double> out;
    double total = 0.0;
    for (int r = lo; r <= hi; ++r) {
        out.push_back(discrete_pmf(r, p));
        total += out.back();
    }
    if (!(total > 0.0)) {
        throw Error(ErrorKind::InvalidParams, "Weibull puts no mass on runs " + std::to_string(lo) + ".." + std::to_string(hi));
    }
    for (double& v : out) v /= total;
    return out;
}

// ---------------------------------------------------------------------------
// Simple model
// ---------------------------------------------------------------------------

class SimpleWeibullModel {
public:
    static SimpleWeibullModel from_params(const WeibullParams& home, const WeibullParams& away,
                                          int max_runs = kDefaultMaxRuns) {
        validate(home);
        validate(away);
        SimpleWeibullModel m = from_pmfs(truncated_pmf(home, 0, max_runs), truncated_pmf(away, 0, max_runs));
        m.home_params_ = home;
        m.away_params_ = away;
        return m;
    }

    /// Arbitrary marginals over 0..size-1 (both vectors must have the same length).
    static SimpleWeibullModel from_pmfs(const std::vector<double>& home, const std::vector<double>& away) {
        if (home.empty() || home.size() != away.size()) {
            throw Error(ErrorKind::InvalidParams, "home and away pmfs must be non-empty and equally long");
        }
        SimpleWeibullModel m;
        m.max_runs_ = static_cast<int>(home.size()) - 1;
        m.home_ = DiscreteDistribution(home);
        m.away_ = DiscreteDistribution(away);
        double tie = 0.0;
        for (std::size_t r = 0; r < home.size(); ++r) tie += m.home_.prob(r) * m.away_.prob(r);
        m.tie_probability_ = tie;
        return m;
    }

    [[nodiscard]] int max_runs() const noexcept { return max_runs_; }
    [[nodiscard]] const DiscreteDistribution& home() const noexcept { return home_; }
    [[nodiscard]] const DiscreteDistribution& away() const noexcept { return away_; }
    [[nodiscard]] const std::optional<WeibullParams>& home_params() const noexcept { return home_params_; }
    [[nodiscard]] const std::optional<WeibullParams>& away_params() const noexcept { return away_params_; }
    [[nodiscard]] double tie_probability() const noexcept { return tie_probability_; }

private:
    SimpleWeibullModel() = default;

    int max_runs_ = kDefaultMaxRuns;
    DiscreteDistribution home_, away_;
    std::optional<WeibullParams> home_params_, away_params_;
    double tie_probability_ = 0.0;
};

inline ScorePair sample_simple(const SimpleWeibullModel& m, Rng& rng) {
    for (long attempt = 0; attempt < kTieRejectionLimit; ++attempt) {
        const int h = static_cast<int>(m.home().sample(rng));
        const int a = static_cast<int>(m.away().sample(rng));
        if (h != a) return {h, a};
    }
    throw Error(ErrorKind::RejectionLimit, "1e6 consecutive tied draws; the marginals are degenerate");
}

inline double model_pmf(const SimpleWeibullModel& m, int h, int a) {
    if (h == a) throw Error(ErrorKind::TieScore, "the model never produces ties");
    if (h < 0 || a < 0 || h > m.max_runs() || a > m.max_runs()) {
        throw Error(ErrorKind::InvalidRange, "score outside 0..max_runs");
    }
    const double no_tie = 1.0 - m.tie_probability();
    if (!(no_tie > 0.0)) throw Error(ErrorKind::RejectionLimit, "model only produces ties");
    return m.home().prob(static_cast<std::size_t>(h)) * m.away().prob(static_cast<std::size_t>(a)) / no_tie;
}

// ---------------------------------------------------------------------------
// Bivariate model
// ---------------------------------------------------------------------------

/// How one diagonal's away-score distribution is described.
struct DiagonalSpec {
    int k = 1;
    double weight = 0.0;
    std::optional<WeibullParams> params;  // fitted Weibull, or
    std::vector<double> empirical_pmf;    // away-score frequencies indexed 0..max_runs
    long games = 0;
    double objective = 0.0;
    bool converged = true;
};

class BivariateScoreModel {
public:
    struct Diagonal {
        DiagonalSpec spec;
        int away_min = 0;  // away score of index 0 in `away`
        DiscreteDistribution away;
    };

    static BivariateScoreModel from_diagonals(std::vector<DiagonalSpec> specs, int max_runs = kDefaultMaxRuns) {
        if (specs.empty()) throw Error(ErrorKind::EmptyInput, "bivariate model needs at least one diagonal");
        if (max_runs < 1) throw Error(ErrorKind::InvalidParams, "max_runs must be positive");
        std::sort(specs.begin(), specs.end(), [](const auto& a, const auto& b) { return a.k < b.k; });

        BivariateScoreModel m;
        m.max_runs_ = max_runs;
        double total = 0.0;
        std::vector<double> weights;
        for (auto& s : specs) {
            if (s.k == 0) throw Error(ErrorKind::InvalidParams, "diagonal k = 0 would produce ties");
            if (std::abs(s.k) > max_runs) throw Error(ErrorKind::InvalidParams, "diagonal outside the score grid");
            if (!m.diagonals_.empty() && m.diagonals_.back().spec.k == s.k) {
                throw Error(ErrorKind::InvalidParams, "duplicate diagonal " + std::to_string(s.k));
            }
            if (!(s.weight >= 0.0 && s.weight <= 1.0)) throw Error(ErrorKind::InvalidParams, "diagonal weight outside [0, 1]");
            total += s.weight;

            const int lo = std::max(0, -s.k);
            const int hi = std::min(max_runs, max_runs - s.k);
            std::vector<double> cells;
            if (s.params) {
                cells = truncated_pmf(*s.params, lo, hi);
            } else {
                for (int a = lo; a <= hi; ++a) {
                    cells.push_back(static_cast<std::size_t>(a) < s.empirical_pmf.size()
                                        ? s.empirical_pmf[static_cast<std::size_t>(a)]
                                        : 0.0);
                }
            }
            weights.push_back(s.weight);
            m.diagonals_.push_back({std::move(s), lo, DiscreteDistribution(cells)});
        }
        if (std::abs(total - 1.0) > 1e-9) {
            throw Error(ErrorKind::InvalidParams, "diagonal weights sum to " + std::to_string(total));
        }
        m.choice_ = DiscreteDistribution(weights);
        return m;
    }

    [[nodiscard]] int max_runs() const noexcept { return max_runs_; }
    [[nodiscard]] const std::vector<Diagonal>& diagonals() const noexcept { return diagonals_; }
    [[nodiscard]] const DiscreteDistribution& diagonal_choice() const noexcept { return choice_; }

    [[nodiscard]] const Diagonal* find(int k) const noexcept {
        const auto it = std::lower_bound(diagonals_.begin(), diagonals_.end(), k,
                                         [](const Diagonal& d, int key) { return d.spec.k < key; });
        return it != diagonals_.end() && it->spec.k == k ? &*it : nullptr;
    }

    /// Sum of weights over k > 0.
    [[nodiscard]] double home_win_share() const noexcept {
        double s = 0.0;
        for (const auto& d : diagonals_) {
            if (d.spec.k > 0) s += d.spec.weight;
        }
        return s;
    }

private:
    int max_runs_ = kDefaultMaxRuns;
    std::vector<Diagonal> diagonals_;
    DiscreteDistribution choice_;
};

inline ScorePair sample_bivariate(const BivariateScoreModel& m, Rng& rng) {
    const auto& d = m.diagonals()[m.diagonal_choice().sample(rng)];
    const int a = d.away_min + static_cast<int>(d.away.sample(rng));
    return {a + d.spec.k, a};
}

inline double model_pmf(const BivariateScoreModel& m, int h, int a) {
    if (h == a) throw Error(ErrorKind::TieScore, "the model never produces ties");
    if (h < 0 || a < 0 || h > m.max_runs() || a > m.max_runs()) {
        throw Error(ErrorKind::InvalidRange, "score outside 0..max_runs");
    }
    const auto* d = m.find(h - a);
    if (!d) return 0.0;
    return d->spec.weight * d->away.prob(static_cast<std::size_t>(a - d->away_min));
}

struct BivariateFitOptions {
    int max_runs = kDefaultMaxRuns;
    long min_diagonal_games = 20;  // sparser diagonals keep their empirical pmf
    FitOptions fit;
};

struct BivariateFitReport {
    long games = 0;
    long folded_games = 0;  // games with a score above max_runs, pulled back onto the grid
    int populated_diagonals = 0;
    int fitted_diagonals = 0;
    int empirical_diagonals = 0;
    int structural_diagonals = 0;  // 2 * max_runs
};

/// Fits one Weibull per populated diagonal to the away scores on that diagonal.
inline BivariateScoreModel fit_bivariate(const std::vector<GameRecord>& games, const BivariateFitOptions& opts = {},
                                         BivariateFitReport* report = nullptr) {
    if (games.empty()) throw Error(ErrorKind::EmptyInput, "no games to fit");
    const int max_runs = opts.max_runs;
    BivariateFitReport rep;
    rep.structural_diagonals = 2 * max_runs;

    std::map<int, std::vector<long>> away_counts;  // k -> counts by away score
    for (const auto& g : games) {
        int h = g.home_runs, a = g.away_runs;
        if (h == a) throw Error(ErrorKind::TieScore, "tied game in fit input");
        if (std::max(h, a) > max_runs) {
            const int margin = std::min(std::abs(h - a), max_runs);
            const int winner = max_runs, loser = max_runs - margin;
            h = h > a ? winner : loser;
            a = h == winner ? loser : winner;
            ++rep.folded_games;
        }
        auto& counts = away_counts[h - a];
        counts.resize(static_cast<std::size_t>(max_runs) + 1, 0);
        ++counts[static_cast<std::size_t>(a)];
        ++rep.games;
    }

    std::vector<DiagonalSpec> specs;
    for (const auto& [k, counts] : away_counts) {
        DiagonalSpec s;
        s.k = k;
        for (long c : counts) s.games += c;
        s.weight = static_cast<double>(s.games) / static_cast<double>(rep.games);
        if (s.games >= opts.min_diagonal_games) {
            const auto emp = EmpiricalRunPmf::from_counts(counts);
            const int lo = std::max(0, -k);
            WeibullParams init{std::max(emp.std_dev(), 0.5), lo - 0.5, 1.7};
            const auto res = fit(emp, init, opts.fit);
            s.params = res.params;
            s.objective = res.objective;
            s.converged = res.converged;
            ++rep.fitted_diagonals;
        } else {
            s.empirical_pmf.resize(counts.size());
            for (std::size_t a = 0; a < counts.size(); ++a) {
                s.empirical_pmf[a] = static_cast<double>(counts[a]) / static_cast<double>(s.games);
            }
            ++rep.empirical_diagonals;
        }
        specs.push_back(std::move(s));
    }
    rep.populated_diagonals = static_cast<int>(specs.size());
    if (report) *report = rep;
    return BivariateScoreModel::from_diagonals(std::move(specs), max_runs);
}

// ---------------------------------------------------------------------------
// Model dispatch
// ---------------------------------------------------------------------------

using ScoreModel = std::variant<SimpleWeibullModel, BivariateScoreModel>;

inline ScorePair sample(const ScoreModel& model, Rng& rng) {
    return std::visit(
        [&](const auto& m) {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, SimpleWeibullModel>) {
                return sample_simple(m, rng);
            } else {
                return sample_bivariate(m, rng);
            }
        },
        model);
}

inline double model_pmf(const ScoreModel& model, int h, int a) {
    return std::visit([&](const auto& m) { return model_pmf(m, h, a); }, model);
}

inline int max_runs(const ScoreModel& model) {
    return std::visit([](const auto& m) { return m.max_runs(); }, model);
}

}  // namespace streakline
