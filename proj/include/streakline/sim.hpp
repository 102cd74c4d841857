#pragma once

// Monte Carlo season ensembles.
//
// Every replicate builds a fresh schedule and fresh scores from its own random stream,
// derived from (root seed, year, replicate). Results are reduced in replicate order,
// so the output does not depend on the number of worker threads.

#include "streakline/core.hpp"
#include "streakline/models.hpp"
#include "streakline/random.hpp"
#include "streakline/schedule.hpp"
#include "streakline/streaks.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <thread>
#include <vector>

namespace streakline {

enum class ModelKind { SimpleWeibull, BivariateWeibull };
enum class ScheduleKind { Basic, Realistic };

struct SimConfig {
    std::vector<YearConfig> years;
    int reps = 10'000;
    ModelKind model = ModelKind::BivariateWeibull;
    ScheduleKind schedule = ScheduleKind::Realistic;
    SeriesDistribution series_dist;
    std::vector<int> orders{2, 3, 4};
    std::uint64_t seed = 0;
    unsigned threads = 0;  // 0: hardware concurrency
};

inline void validate(const SimConfig& c) {
    if (c.reps < 1) throw Error(ErrorKind::InvalidConfig, "reps must be at least 1");
    if (c.orders.empty()) throw Error(ErrorKind::InvalidConfig, "no streak orders requested");
    for (int n : c.orders) check_order(n);
    validate(c.series_dist);
    for (const auto& y : c.years) validate(y);
}

struct YearStats {
    int year = 0;
    int order = 2;
    double min = 0, p05 = 0, mean = 0, p95 = 0, max = 0;
    std::optional<long> historic;

    friend bool operator==(const YearStats&, const YearStats&) = default;
};

struct EraHistogram {
    std::map<long, double> fractions;  // total streaks over the era -> fraction of replicates
};

struct EraResult {
    int order = 4;
    int reps = 0;
    int years = 0;
    EraHistogram histogram;
    double mean_total = 0.0;
    double year_hit_fraction = 0.0;  // simulated seasons with at least one streak of the order
};

struct ComparisonReport {
    int order = 2;
    int years_compared = 0;
    int exceeds_mean = 0;
    int exceeds_p95 = 0;
    int below_p05 = 0;
    int exceeds_max = 0;
    int below_min = 0;
};

// ---------------------------------------------------------------------------
// Parallel helpers
// ---------------------------------------------------------------------------

inline unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

/// Runs body(i) for i in [0, n). Exceptions are collected and the one with the
/// lowest index is rethrown after all workers finish.
template <typename Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body) {
    threads = std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(std::max<std::size_t>(n, 1)));
    std::atomic<std::size_t> next{0};
    std::mutex failure_mutex;
    std::size_t failed_index = n;
    std::exception_ptr failure;

    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (i < failed_index) {
                    failed_index = i;
                    failure = std::current_exception();
                }
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
}

// ---------------------------------------------------------------------------
// Single seasons
// ---------------------------------------------------------------------------

/// Basic schedules need an even G; odd historical averages are rounded down.
inline int effective_games(const YearConfig& cfg, ScheduleKind kind) {
    if (kind == ScheduleKind::Basic && cfg.games_per_team % 2 != 0) return cfg.games_per_team - 1;
    return cfg.games_per_team;
}

inline Schedule make_schedule(const YearConfig& cfg, ScheduleKind kind, const SeriesDistribution& dist, Rng& rng) {
    const int games = effective_games(cfg, kind);
    return kind == ScheduleKind::Basic ? basic_schedule(cfg.num_teams, games, rng)
                                       : realistic_schedule(cfg.num_teams, games, dist, rng);
}

inline TeamId synthetic_team(int index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "T%02d", index);
    return TeamId(buf);
}

/// Draws one score per scheduled game and assembles every team's season in schedule order.
/// Synthetic games share the date Jan 1 of `year`; `seq` is the schedule slot.
inline std::vector<TeamSeason> simulate_season(const Schedule& schedule, const ScoreModel& model, Rng& rng,
                                               int year = 2000) {
    std::vector<TeamSeason> seasons(static_cast<std::size_t>(schedule.num_teams));
    for (int t = 0; t < schedule.num_teams; ++t) {
        seasons[static_cast<std::size_t>(t)].team = synthetic_team(t);
        seasons[static_cast<std::size_t>(t)].year = year;
    }
    const Date date = make_date(year, 1, 1);
    int slot = 0;
    for (const auto& p : schedule.games) {
        const ScorePair s = sample(model, rng);
        auto& home = seasons[static_cast<std::size_t>(p.home)];
        auto& away = seasons[static_cast<std::size_t>(p.away)];
        home.games.push_back({s.home_runs, s.away_runs, away.team, true, date, slot});
        away.games.push_back({s.away_runs, s.home_runs, home.team, false, date, slot});
        ++slot;
    }
    return seasons;
}

/// Same draws as simulate_season, but only the league-wide streak counts per order are kept.
inline std::vector<long> simulate_season_counts(const Schedule& schedule, const ScoreModel& model, Rng& rng,
                                                std::span<const int> orders) {
    struct Tracker {
        int scored = -1, allowed = -1, run = 0;
    };
    std::vector<Tracker> teams(static_cast<std::size_t>(schedule.num_teams));
    std::vector<long> counts(orders.size(), 0);
    auto update = [&](Tracker& t, int scored, int allowed) {
        if (t.scored == scored && t.allowed == allowed) {
            ++t.run;
        } else {
            t = {scored, allowed, 1};
        }
        for (std::size_t i = 0; i < orders.size(); ++i) {
            if (t.run >= orders[i]) ++counts[i];
        }
    };
    for (const auto& p : schedule.games) {
        const ScorePair s = sample(model, rng);
        update(teams[static_cast<std::size_t>(p.home)], s.home_runs, s.away_runs);
        update(teams[static_cast<std::size_t>(p.away)], s.away_runs, s.home_runs);
    }
    return counts;
}

// ---------------------------------------------------------------------------
// Ensembles
// ---------------------------------------------------------------------------

namespace detail {

inline constexpr std::uint64_t kYearStreamTag = 0x59454152;  // per-year ensembles
inline constexpr std::uint64_t kEraStreamTag = 0x45524121;   // era replicates

inline std::uint64_t year_key(int year) { return static_cast<std::uint64_t>(static_cast<std::int64_t>(year)); }

inline std::vector<long> replicate_counts(const YearConfig& cfg, const SimConfig& sim, const ScoreModel& model,
                                          Rng& rng) {
    const Schedule schedule = make_schedule(cfg, sim.schedule, sim.series_dist, rng);
    return simulate_season_counts(schedule, model, rng, sim.orders);
}

/// Nearest-rank percentile: the ceil(q * N)-th smallest value, q given in percent.
inline double nearest_rank(const std::vector<long>& sorted, int percent) {
    const std::size_t n = sorted.size();
    std::size_t rank = (static_cast<std::size_t>(percent) * n + 99) / 100;
    rank = std::clamp<std::size_t>(rank, 1, n);
    return static_cast<double>(sorted[rank - 1]);
}

}  // namespace detail

inline YearStats summarize(int year, int order, std::vector<long> counts) {
    if (counts.empty()) throw Error(ErrorKind::EmptyInput, "no replicate counts");
    std::sort(counts.begin(), counts.end());
    double sum = 0.0;
    for (long c : counts) sum += static_cast<double>(c);
    YearStats s;
    s.year = year;
    s.order = order;
    s.min = static_cast<double>(counts.front());
    s.max = static_cast<double>(counts.back());
    s.mean = sum / static_cast<double>(counts.size());
    s.p05 = detail::nearest_rank(counts, 5);
    s.p95 = detail::nearest_rank(counts, 95);
    return s;
}

/// Raw per-replicate counts for one year: result[order index][replicate].
inline std::vector<std::vector<long>> simulate_year_counts(const YearConfig& cfg, const SimConfig& sim,
                                                           const ScoreModel& model) {
    validate(cfg);
    const auto reps = static_cast<std::size_t>(sim.reps);
    std::vector<std::vector<long>> per_rep(reps);
    parallel_for(reps, sim.threads, [&](std::size_t r) {
        Rng rng = make_stream(sim.seed, {detail::kYearStreamTag, detail::year_key(cfg.year), r});
        per_rep[r] = detail::replicate_counts(cfg, sim, model, rng);
    });
    std::vector<std::vector<long>> out(sim.orders.size(), std::vector<long>(reps));
    for (std::size_t r = 0; r < reps; ++r) {
        for (std::size_t o = 0; o < sim.orders.size(); ++o) out[o][r] = per_rep[r][o];
    }
    return out;
}

/// Statistics for every configured order of one year (one ensemble shared by all orders).
inline std::vector<YearStats> simulate_year_all_orders(const YearConfig& cfg, const SimConfig& sim,
                                                       const ScoreModel& model) {
    validate(sim);
    auto counts = simulate_year_counts(cfg, sim, model);
    std::vector<YearStats> out;
    for (std::size_t o = 0; o < sim.orders.size(); ++o) out.push_back(summarize(cfg.year, sim.orders[o], std::move(counts[o])));
    return out;
}

inline YearStats simulate_year(const YearConfig& cfg, const SimConfig& sim, const ScoreModel& model, int order) {
    check_order(order);
    SimConfig one = sim;
    one.orders = {order};
    return simulate_year_all_orders(cfg, one, model).front();
}

/// Per-year ensembles for every configured year and order, ordered by (year, order).
/// `historic` maps order -> (year -> observed count) and fills YearStats::historic.
inline std::vector<YearStats> simulate_years(const SimConfig& sim, const ScoreModel& model,
                                             const std::map<int, std::map<int, long>>& historic = {}) {
    validate(sim);
    std::vector<YearStats> out;
    for (const auto& cfg : sim.years) {
        for (auto& s : simulate_year_all_orders(cfg, sim, model)) {
            if (const auto o = historic.find(s.order); o != historic.end()) {
                if (const auto y = o->second.find(s.year); y != o->second.end()) s.historic = y->second;
            }
            out.push_back(s);
        }
    }
    return out;
}

/// Simulates every configured year once per era replicate and histograms the era totals.
inline EraResult simulate_era(const SimConfig& sim, const ScoreModel& model, int order) {
    validate(sim);
    check_order(order);
    if (sim.years.empty()) throw Error(ErrorKind::InvalidConfig, "era simulation needs at least one year");
    const auto reps = static_cast<std::size_t>(sim.reps);
    SimConfig one = sim;
    one.orders = {order};

    std::vector<long> totals(reps, 0), seasons_hit(reps, 0);
    parallel_for(reps, sim.threads, [&](std::size_t r) {
        long total = 0, hit = 0;
        for (const auto& cfg : sim.years) {
            Rng rng = make_stream(sim.seed, {detail::kEraStreamTag, r, detail::year_key(cfg.year)});
            const long c = detail::replicate_counts(cfg, one, model, rng).front();
            total += c;
            hit += c > 0 ? 1 : 0;
        }
        totals[r] = total;
        seasons_hit[r] = hit;
    });

    EraResult res;
    res.order = order;
    res.reps = sim.reps;
    res.years = static_cast<int>(sim.years.size());
    std::map<long, long> hist;
    double sum = 0.0, hits = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
        ++hist[totals[r]];
        sum += static_cast<double>(totals[r]);
        hits += static_cast<double>(seasons_hit[r]);
    }
    for (const auto& [count, n] : hist) res.histogram.fractions[count] = static_cast<double>(n) / static_cast<double>(reps);
    res.mean_total = sum / static_cast<double>(reps);
    res.year_hit_fraction = hits / (static_cast<double>(reps) * static_cast<double>(sim.years.size()));
    return res;
}

/// Counts the years in which the observed streak count beats or undershoots the bands.
inline ComparisonReport compare_to_history(std::span<const YearStats> stats, const std::map<int, long>& historic) {
    ComparisonReport r;
    for (const auto& s : stats) {
        const auto it = historic.find(s.year);
        if (it == historic.end()) continue;
        const auto h = static_cast<double>(it->second);
        r.order = s.order;
        ++r.years_compared;
        r.exceeds_mean += h > s.mean ? 1 : 0;
        r.exceeds_p95 += h > s.p95 ? 1 : 0;
        r.below_p05 += h < s.p05 ? 1 : 0;
        r.exceeds_max += h > s.max ? 1 : 0;
        r.below_min += h < s.min ? 1 : 0;
    }
    if (r.years_compared == 0) throw Error(ErrorKind::DisjointYears, "simulated and historic years do not overlap");
    return r;
}

/// Chance that `repeats` consecutive games share one score when both teams' scores are
/// uniform on [score_min, score_max]. The first game is free.
inline double naive_estimate(int score_min, int score_max, int repeats) {
    if (score_max < score_min) throw Error(ErrorKind::InvalidRange, "score_max must be at least score_min");
    if (repeats < 2) throw Error(ErrorKind::InvalidRange, "need at least 2 repeats");
    const double span = static_cast<double>(score_max) - static_cast<double>(score_min) + 1.0;
    return 1.0 / std::pow(span * span, repeats - 1);
}

}  // namespace streakline
