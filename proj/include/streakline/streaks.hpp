#pragma once

// Same-score streak detection and the descriptive statistics built on it.
//
// An order-n streak is a window of n consecutive games in one team's season whose
// (scored, allowed) pairs are identical. Windows overlap: a run of k identical
// games holds k - n + 1 order-n streaks.

#include "streakline/core.hpp"

#include <cmath>
#include <map>
#include <set>
#include <span>
#include <variant>
#include <vector>

namespace streakline {

struct StreakSpan {
    TeamId team;
    int year = 0;
    std::size_t start_index = 0;
    int order = 2;
    int scored = 0;
    int allowed = 0;

    friend bool operator==(const StreakSpan&, const StreakSpan&) = default;
};

struct RunTotalStats {
    double mean = 0.0;
    double std_dev = 0.0;  // population
    std::size_t count = 0;
};

inline void check_order(int n) {
    if (n < 2) {
        throw Error(ErrorKind::InvalidOrder, "streak order must be at least 2, got " + std::to_string(n));
    }
}

/// Calls `emit(start)` for every order-n window of equal elements. `same(i, j)`
/// compares positions i and j of a sequence of length `len`.
template <typename Same, typename Emit>
void for_each_window(std::size_t len, int n, Same&& same, Emit&& emit) {
    std::size_t run = 0;
    for (std::size_t i = 0; i < len; ++i) {
        run = (i > 0 && same(i - 1, i)) ? run + 1 : 1;
        if (run >= static_cast<std::size_t>(n)) {
            emit(i + 1 - static_cast<std::size_t>(n));
        }
    }
}

inline std::vector<StreakSpan> find_streaks(const TeamSeason& season, int n) {
    check_order(n);
    const auto& g = season.games;
    std::vector<StreakSpan> spans;
    for_each_window(
        g.size(), n, [&](std::size_t a, std::size_t b) { return g[a].same_score(g[b]); },
        [&](std::size_t start) {
            spans.push_back({season.team, season.year, start, n, g[start].scored, g[start].allowed});
        });
    return spans;
}

inline std::size_t count_streaks(const TeamSeason& season, int n) {
    check_order(n);
    const auto& g = season.games;
    std::size_t count = 0;
    for_each_window(
        g.size(), n, [&](std::size_t a, std::size_t b) { return g[a].same_score(g[b]); },
        [&](std::size_t) { ++count; });
    return count;
}

/// Per-year total of order-n streaks over every team season (both participants count).
inline std::map<int, long> league_streak_counts(std::span<const TeamSeason> seasons, int n) {
    check_order(n);
    std::map<int, long> out;
    for (const auto& s : seasons) {
        out[s.year] += static_cast<long>(count_streaks(s, n));
    }
    return out;
}

inline long pair_count(std::span<const TeamSeason> seasons) {
    long pairs = 0;
    for (const auto& s : seasons) {
        if (s.games.size() > 1) pairs += static_cast<long>(s.games.size()) - 1;
    }
    return pairs;
}

/// Fraction of consecutive-game pairs that form an order-2 streak.
inline double pair_probability(std::span<const TeamSeason> seasons) {
    const long pairs = pair_count(seasons);
    if (pairs == 0) {
        throw Error(ErrorKind::DivisionByZero, "no consecutive game pairs");
    }
    long streaks = 0;
    for (const auto& s : seasons) streaks += static_cast<long>(count_streaks(s, 2));
    return static_cast<double>(streaks) / static_cast<double>(pairs);
}

struct AllGames {};
struct InStreakOfOrder {
    int n = 2;
};
using GameSelector = std::variant<AllGames, InStreakOfOrder>;

/// Mean and population standard deviation of total runs over distinct selected games.
/// A game is identified by (date, seq, home, away), so it counts once even when it
/// lies in both teams' streaks or in several overlapping windows.
inline RunTotalStats run_total_stats(std::span<const TeamSeason> seasons, const GameSelector& selector) {
    std::map<GameKey, int> totals;
    if (std::holds_alternative<AllGames>(selector)) {
        for (const auto& s : seasons) {
            for (const auto& v : s.games) totals.emplace(key_of(v, s.team), v.scored + v.allowed);
        }
    } else {
        const int n = std::get<InStreakOfOrder>(selector).n;
        check_order(n);
        for (const auto& s : seasons) {
            const auto& g = s.games;
            std::vector<bool> inside(g.size(), false);
            for_each_window(
                g.size(), n, [&](std::size_t a, std::size_t b) { return g[a].same_score(g[b]); },
                [&](std::size_t start) {
                    for (std::size_t i = start; i < start + static_cast<std::size_t>(n); ++i) inside[i] = true;
                });
            for (std::size_t i = 0; i < g.size(); ++i) {
                if (inside[i]) totals.emplace(key_of(g[i], s.team), g[i].scored + g[i].allowed);
            }
        }
    }
    if (totals.empty()) {
        throw Error(ErrorKind::EmptySelection, "no games match the selector");
    }
    double sum = 0.0;
    for (const auto& [key, runs] : totals) sum += runs;
    const double mean = sum / static_cast<double>(totals.size());
    double ss = 0.0;
    for (const auto& [key, runs] : totals) ss += (runs - mean) * (runs - mean);
    return {mean, std::sqrt(ss / static_cast<double>(totals.size())), totals.size()};
}

}  // namespace streakline
