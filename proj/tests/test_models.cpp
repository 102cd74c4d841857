#include "oracles.hpp"
#include "streakline/ingest.hpp"
#include "streakline/models.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace streakline;

namespace {

const WeibullParams kHome{4.9, -0.3, 1.65};
const WeibullParams kAway{4.6, -0.25, 1.7};

std::vector<GameRecord> synthetic_games() {
    static const auto games = [] {
        std::istringstream in(oracle::synthetic_league_csv(16, 160, 2001, 3, 2718));
        return parse_game_log(in, GameLogFormat::SimpleCsv);
    }();
    return games;
}

const BivariateScoreModel& fitted_bivariate() {
    static const auto m = fit_bivariate(synthetic_games());
    return m;
}

ScorePair sample_model(const SimpleWeibullModel& m, Rng& rng) { return sample_simple(m, rng); }
ScorePair sample_model(const BivariateScoreModel& m, Rng& rng) { return sample_bivariate(m, rng); }

/// 10^6 draws against model_pmf: no ties, per-cell z-scores, Pearson test.
template <typename Model>
void expect_consistent(const Model& m, std::uint64_t seed) {
    const int mr = m.max_runs();
    const long n = 1'000'000;
    Rng rng(seed);
    const auto side = static_cast<std::size_t>(mr) + 1;
    std::vector<double> grid(side * side, 0.0);
    long ties = 0;
    for (long i = 0; i < n; ++i) {
        const ScorePair s = sample_model(m, rng);
        if (s.home_runs == s.away_runs) ++ties;
        grid[static_cast<std::size_t>(s.home_runs) * side + static_cast<std::size_t>(s.away_runs)] += 1.0;
    }
    EXPECT_EQ(ties, 0);

    std::vector<double> obs, expected;
    double total_p = 0.0;
    int beyond_three = 0, cells = 0;
    for (int h = 0; h <= mr; ++h) {
        for (int a = 0; a <= mr; ++a) {
            if (h == a) continue;
            const double p = model_pmf(m, h, a);
            total_p += p;
            const double o = grid[static_cast<std::size_t>(h) * side + static_cast<std::size_t>(a)];
            obs.push_back(o);
            expected.push_back(p * n);
            if (p * n >= 5.0) {
                ++cells;
                const double se = std::sqrt(n * p * (1 - p));
                if (std::abs(o - n * p) > 3 * se) ++beyond_three;
                EXPECT_LT(std::abs(o - n * p), 5 * se) << h << '-' << a;
            } else if (p == 0.0) {
                EXPECT_EQ(o, 0.0) << h << '-' << a;
            }
        }
    }
    EXPECT_NEAR(total_p, 1.0, 1e-9);
    EXPECT_LE(beyond_three, std::max(2, cells / 100));
    const auto chi = oracle::chi_squared(obs, expected);
    EXPECT_GT(chi.p_value, 0.001) << "chi2 " << chi.statistic << " dof " << chi.dof;
}

}  // namespace

TEST(SimpleModel, DeterministicMarginals) {
    std::vector<double> home(11, 0.0), away(11, 0.0);
    home[5] = 1.0;
    away[3] = 1.0;
    const auto m = SimpleWeibullModel::from_pmfs(home, away);
    Rng rng(1);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_simple(m, rng), (ScorePair{5, 3}));
    EXPECT_DOUBLE_EQ(model_pmf(m, 5, 3), 1.0);
}

TEST(SimpleModel, AllTiesHitTheRejectionLimit) {
    const auto m = SimpleWeibullModel::from_pmfs({0.0, 0.0, 1.0}, {0.0, 0.0, 1.0});
    Rng rng(1);
    try {
        sample_simple(m, rng);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::RejectionLimit);
    }
}

TEST(SimpleModel, PmfIsTheRejectionAlgebra) {
    const auto m = SimpleWeibullModel::from_params(kHome, kAway);
    const auto ph = truncated_pmf(kHome, 0, kDefaultMaxRuns);
    const auto pa = truncated_pmf(kAway, 0, kDefaultMaxRuns);
    double tie = 0.0;
    for (std::size_t r = 0; r < ph.size(); ++r) tie += ph[r] * pa[r];
    EXPECT_NEAR(model_pmf(m, 5, 3), ph[5] * pa[3] / (1.0 - tie), 1e-15);
    EXPECT_NEAR(m.tie_probability(), tie, 1e-15);
    EXPECT_THROW(model_pmf(m, 4, 4), Error);
    EXPECT_THROW(model_pmf(m, 31, 4), Error);
}

TEST(SimpleModel, SamplerMatchesPmf) { expect_consistent(SimpleWeibullModel::from_params(kHome, kAway), 101); }

TEST(TruncatedPmf, SumsToOneOverRange) {
    const auto p = truncated_pmf(kHome, 3, 12);
    EXPECT_EQ(p.size(), 10u);
    double s = 0.0;
    for (double v : p) s += v;
    EXPECT_NEAR(s, 1.0, 1e-15);
    EXPECT_NEAR(p[0] / p[1], discrete_pmf(3, kHome) / discrete_pmf(4, kHome), 1e-12);
}

TEST(BivariateFit, IdenticalGamesGiveOneDiagonal) {
    std::vector<GameRecord> games(25, GameRecord{make_date(2000, 5, 1), 0, TeamId("A"), TeamId("B"), 3, 2});
    BivariateFitReport rep;
    const auto m = fit_bivariate(games, {}, &rep);
    ASSERT_EQ(m.diagonals().size(), 1u);
    EXPECT_EQ(m.diagonals()[0].spec.k, 1);
    EXPECT_DOUBLE_EQ(m.diagonals()[0].spec.weight, 1.0);
    EXPECT_EQ(rep.populated_diagonals, 1);
    Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
        const auto s = sample_bivariate(m, rng);
        EXPECT_EQ(s.home_runs - s.away_runs, 1);
    }
}

TEST(BivariateFit, TinyInputFallsBackToEmpirical) {
    std::vector<GameRecord> games;
    for (int i = 0; i < 10; ++i) {
        games.push_back({make_date(2000, 5, 1 + i), 0, TeamId("A"), TeamId("B"), i % 4, i % 4 + 1 + i % 2});
    }
    BivariateFitReport rep;
    const auto m = fit_bivariate(games, {}, &rep);
    EXPECT_EQ(rep.fitted_diagonals, 0);
    EXPECT_EQ(rep.empirical_diagonals, rep.populated_diagonals);
    for (const auto& d : m.diagonals()) EXPECT_FALSE(d.spec.params.has_value());
}

TEST(BivariateFit, WeightsReproduceHomeWinRate) {
    const auto games = synthetic_games();
    BivariateFitReport rep;
    const auto m = fit_bivariate(games, {}, &rep);
    long home_wins = 0;
    for (const auto& g : games) home_wins += g.home_runs > g.away_runs ? 1 : 0;
    double sum = 0.0, positive = 0.0;
    long positive_games = 0;
    for (const auto& d : m.diagonals()) {
        sum += d.spec.weight;
        if (d.spec.k > 0) {
            positive += d.spec.weight;
            positive_games += d.spec.games;
        }
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
    EXPECT_EQ(positive_games, home_wins);
    EXPECT_NEAR(positive, static_cast<double>(home_wins) / static_cast<double>(games.size()), 1e-12);
    EXPECT_NEAR(m.home_win_share(), positive, 1e-15);
    EXPECT_EQ(rep.games, static_cast<long>(games.size()));
    EXPECT_EQ(rep.structural_diagonals, 60);
    EXPECT_GT(rep.fitted_diagonals, 10);
}

TEST(BivariateModel, SingleDiagonalPointMass) {
    DiagonalSpec d;
    d.k = 1;
    d.weight = 1.0;
    d.empirical_pmf = {0.0, 0.0, 1.0};
    const auto m = BivariateScoreModel::from_diagonals({d});
    Rng rng(2);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_bivariate(m, rng), (ScorePair{3, 2}));
    EXPECT_DOUBLE_EQ(model_pmf(m, 3, 2), 1.0);
    EXPECT_DOUBLE_EQ(model_pmf(m, 5, 2), 0.0);
}

TEST(BivariateModel, PmfIsWeightTimesDiagonalCell) {
    const auto& m = fitted_bivariate();
    const auto* d1 = m.find(1);
    ASSERT_NE(d1, nullptr);
    ASSERT_TRUE(d1->spec.params.has_value());
    const auto cells = truncated_pmf(*d1->spec.params, 0, kDefaultMaxRuns - 1);
    EXPECT_NEAR(model_pmf(m, 3, 2), d1->spec.weight * cells[2], 1e-15);

    // Negative diagonals start at away = -k.
    const auto* dm2 = m.find(-2);
    ASSERT_NE(dm2, nullptr);
    EXPECT_EQ(dm2->away_min, 2);
}

TEST(BivariateModel, SamplerMatchesPmf) { expect_consistent(fitted_bivariate(), 202); }

TEST(BivariateModel, DiagonalFrequenciesMatchWeights) {
    const auto& m = fitted_bivariate();
    Rng rng(303);
    const long n = 1'000'000;
    std::map<int, double> seen;
    for (long i = 0; i < n; ++i) {
        const auto s = sample_bivariate(m, rng);
        seen[s.home_runs - s.away_runs] += 1.0;
    }
    // With ~50 diagonals a few 3-sigma excursions are expected by chance alone.
    int beyond_three = 0;
    for (const auto& d : m.diagonals()) {
        const double w = d.spec.weight;
        const double se = std::sqrt(n * w * (1 - w));
        const double dev = std::abs(seen[d.spec.k] - n * w);
        if (dev > 3 * se) ++beyond_three;
        EXPECT_LT(dev, std::max(4.5 * se, 1.0)) << "k=" << d.spec.k;
    }
    EXPECT_LE(beyond_three, 2);
}

TEST(BivariateModel, RejectsInvalidDiagonals) {
    auto spec = [](int k, double w) {
        DiagonalSpec d;
        d.k = k;
        d.weight = w;
        d.empirical_pmf = std::vector<double>(31, 1.0);
        return d;
    };
    EXPECT_THROW(BivariateScoreModel::from_diagonals({spec(0, 1.0)}), Error);
    EXPECT_THROW(BivariateScoreModel::from_diagonals({spec(31, 1.0)}), Error);
    EXPECT_THROW(BivariateScoreModel::from_diagonals({spec(1, 0.5), spec(1, 0.5)}), Error);
    EXPECT_THROW(BivariateScoreModel::from_diagonals({spec(1, 0.5), spec(2, 0.4)}), Error);
    EXPECT_THROW(BivariateScoreModel::from_diagonals({}), Error);
    EXPECT_NO_THROW(BivariateScoreModel::from_diagonals({spec(30, 0.5), spec(-30, 0.5)}));
}

TEST(ScoreModelDispatch, RoutesToTheRightModel) {
    const ScoreModel simple = SimpleWeibullModel::from_params(kHome, kAway, 20);
    EXPECT_EQ(max_runs(simple), 20);
    const ScoreModel bivariate = fitted_bivariate();
    EXPECT_EQ(max_runs(bivariate), kDefaultMaxRuns);
    Rng rng(4);
    for (int i = 0; i < 1000; ++i) {
        const auto s = sample(simple, rng);
        EXPECT_NE(s.home_runs, s.away_runs);
        EXPECT_LE(std::max(s.home_runs, s.away_runs), 20);
        EXPECT_GT(model_pmf(bivariate, s.home_runs, s.away_runs) + model_pmf(simple, s.home_runs, s.away_runs), 0.0);
    }
}
