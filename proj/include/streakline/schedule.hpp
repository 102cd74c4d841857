#pragma once

// Synthetic season schedules.
//
// A schedule is an ordered list of (home, away) pairings over team indices 0..T-1;
// each team experiences its games in list order.
//
// basic_schedule: uniformly shuffled games, each team exactly G/2 home and G/2 away.
// realistic_schedule: seasons made of 2-, 3- and 4-game series. Seasons are built in
// synchronized blocks; every block pairs the teams that still have games left at
// random, each pair plays one series with a single host, and a team never meets the
// same opponent in two consecutive series (unless the league has only two teams).

#include "streakline/core.hpp"
#include "streakline/random.hpp"

#include <array>
#include <map>
#include <numeric>
#include <ostream>
#include <vector>

namespace streakline {

struct Pairing {
    int home = 0;
    int away = 0;

    friend bool operator==(const Pairing&, const Pairing&) = default;
};

struct Schedule {
    int num_teams = 0;
    std::vector<Pairing> games;

    friend bool operator==(const Schedule&, const Schedule&) = default;
};

/// Weights over series lengths 2, 3 and 4.
struct SeriesDistribution {
    std::array<double, 3> weights{0.2, 0.6, 0.2};

    [[nodiscard]] double weight(int length) const { return weights.at(static_cast<std::size_t>(length - 2)); }

    [[nodiscard]] double mean_length() const {
        return (2 * weights[0] + 3 * weights[1] + 4 * weights[2]) / (weights[0] + weights[1] + weights[2]);
    }
};

inline void validate(const SeriesDistribution& d) {
    double total = 0.0;
    for (double w : d.weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorKind::InvalidConfig, "series weights must be non-negative");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) throw Error(ErrorKind::InvalidConfig, "series weights must sum to 1");
}

// ---------------------------------------------------------------------------
// Basic schedule
// ---------------------------------------------------------------------------

inline Schedule basic_schedule(int teams, int games_per_team, Rng& rng) {
    if (teams < 2) throw Error(ErrorKind::InfeasibleConfig, "a league needs at least 2 teams");
    if (games_per_team < 2 || games_per_team % 2 != 0) {
        throw Error(ErrorKind::InfeasibleConfig, "basic schedules need an even, positive G (got " +
                                                     std::to_string(games_per_team) + ")");
    }
    const int half = games_per_team / 2;
    const std::size_t n = static_cast<std::size_t>(teams) * static_cast<std::size_t>(half);

    std::vector<int> hosts(n), guests(n);
    for (std::size_t i = 0; i < n; ++i) hosts[i] = guests[i] = static_cast<int>(i / static_cast<std::size_t>(half));
    shuffle(std::span<int>(guests), rng);

    // Remove self-pairings by swapping guests with a pairing that involves neither team.
    // Such a partner always exists, and every swap strictly reduces the self-pairing count.
    for (std::size_t i = 0; i < n; ++i) {
        if (hosts[i] != guests[i]) continue;
        const int t = hosts[i];
        std::size_t j;
        do {
            j = uniform_index(rng, n);
        } while (hosts[j] == t || guests[j] == t);
        std::swap(guests[i], guests[j]);
    }

    Schedule s{teams, {}};
    s.games.reserve(n);
    for (std::size_t i = 0; i < n; ++i) s.games.push_back({hosts[i], guests[i]});
    shuffle(std::span<Pairing>(s.games), rng);
    return s;
}

// ---------------------------------------------------------------------------
// Realistic schedule
// ---------------------------------------------------------------------------

struct Series {
    int host = 0;
    int guest = 0;
    int length = 0;
};

inline constexpr int kRealisticHomeTolerance = 2;
inline constexpr int kRealisticMaxAttempts = 1000;

namespace detail {

inline bool leaves_valid_remainder(int remaining, int length) {
    return length <= remaining && remaining - length != 1;
}

/// Greedy host choice: the team further behind its pro-rata home quota hosts.
inline void assign_hosts(std::vector<Series>& series, int teams, int games_per_team, Rng& rng) {
    std::vector<int> home(static_cast<std::size_t>(teams), 0), played(static_cast<std::size_t>(teams), 0);
    for (auto& s : series) {
        const auto a = static_cast<std::size_t>(s.host), b = static_cast<std::size_t>(s.guest);
        const int deficit_a = played[a] - 2 * home[a];
        const int deficit_b = played[b] - 2 * home[b];
        const bool swap_roles = deficit_b > deficit_a || (deficit_a == deficit_b && uniform_index(rng, 2) == 1);
        if (swap_roles) std::swap(s.host, s.guest);
        home[static_cast<std::size_t>(s.host)] += s.length;
        played[a] += s.length;
        played[b] += s.length;
    }

    // Local repair: flip hosts while that lowers the total squared deviation from G/2.
    auto dev = [&](int t) { return 2 * home[static_cast<std::size_t>(t)] - games_per_team; };
    for (bool improved = true; improved;) {
        improved = false;
        for (auto& s : series) {
            const int dh = dev(s.host), dg = dev(s.guest);
            const int before = dh * dh + dg * dg;
            const int after = (dh - 2 * s.length) * (dh - 2 * s.length) + (dg + 2 * s.length) * (dg + 2 * s.length);
            if (after < before) {
                home[static_cast<std::size_t>(s.host)] -= s.length;
                home[static_cast<std::size_t>(s.guest)] += s.length;
                std::swap(s.host, s.guest);
                improved = true;
            }
        }
    }
}

inline bool home_within_tolerance(int home, int games_per_team, int tolerance) {
    // Odd G cannot split evenly, so the half game is granted on top of the tolerance.
    return std::abs(2 * home - games_per_team) <= 2 * tolerance + games_per_team % 2;
}

inline bool hosts_within_tolerance(const std::vector<Series>& series, int teams, int games_per_team) {
    std::vector<int> home(static_cast<std::size_t>(teams), 0);
    for (const auto& s : series) home[static_cast<std::size_t>(s.host)] += s.length;
    return std::all_of(home.begin(), home.end(),
                       [&](int h) { return home_within_tolerance(h, games_per_team, kRealisticHomeTolerance); });
}

/// One attempt at building the block sequence; empty on a dead end.
inline std::vector<std::vector<Series>> try_series_blocks(int teams, int games_per_team,
                                                          const SeriesDistribution& dist, Rng& rng) {
    const auto n = static_cast<std::size_t>(teams);
    std::vector<int> remaining(n, games_per_team), last_opponent(n, -1);
    std::vector<std::vector<Series>> blocks;
    std::vector<int> active, candidates;
    std::vector<bool> matched(n);

    for (;;) {
        active.clear();
        for (std::size_t t = 0; t < n; ++t) {
            if (remaining[t] > 0) active.push_back(static_cast<int>(t));
        }
        if (active.empty()) return blocks;
        shuffle(std::span<int>(active), rng);
        // Teams furthest from finishing pick first so the league stays in step.
        std::stable_sort(active.begin(), active.end(), [&](int a, int b) {
            return remaining[static_cast<std::size_t>(a)] > remaining[static_cast<std::size_t>(b)];
        });

        std::fill(matched.begin(), matched.end(), false);
        std::vector<Series> block;
        for (int a : active) {
            const auto ia = static_cast<std::size_t>(a);
            if (matched[ia]) continue;
            candidates.clear();
            for (int b : active) {
                const auto ib = static_cast<std::size_t>(b);
                if (b == a || matched[ib]) continue;
                if (teams > 2 && (last_opponent[ia] == b || last_opponent[ib] == a)) continue;
                bool any = false;
                for (int len = 2; len <= 4; ++len) {
                    any = any || (leaves_valid_remainder(remaining[ia], len) && leaves_valid_remainder(remaining[ib], len));
                }
                if (any) candidates.push_back(b);
            }
            if (candidates.empty()) continue;
            const int b = candidates[uniform_index(rng, candidates.size())];
            const auto ib = static_cast<std::size_t>(b);

            std::array<double, 3> w{};
            std::array<int, 3> feasible{};
            double total = 0.0;
            int feasible_count = 0;
            for (int len = 2; len <= 4; ++len) {
                const auto slot = static_cast<std::size_t>(len - 2);
                if (leaves_valid_remainder(remaining[ia], len) && leaves_valid_remainder(remaining[ib], len)) {
                    w[slot] = dist.weight(len);
                    feasible[static_cast<std::size_t>(feasible_count++)] = len;
                    total += w[slot];
                }
            }
            int length;
            if (total > 0.0) {
                const double u = uniform01(rng) * total;
                length = 4;
                double acc = 0.0;
                for (std::size_t slot = 0; slot < 3; ++slot) {
                    acc += w[slot];
                    if (w[slot] > 0.0 && u < acc) {
                        length = 2 + static_cast<int>(slot);
                        break;
                    }
                }
                if (w[static_cast<std::size_t>(length - 2)] == 0.0) length = feasible[static_cast<std::size_t>(feasible_count - 1)];
            } else {
                // The distribution puts no mass on any length that still fits; take any that does.
                length = feasible[uniform_index(rng, static_cast<std::size_t>(feasible_count))];
            }

            matched[ia] = matched[ib] = true;
            remaining[ia] -= length;
            remaining[ib] -= length;
            last_opponent[ia] = b;
            last_opponent[ib] = a;
            block.push_back({a, b, length});
        }
        if (block.empty()) return {};
        blocks.push_back(std::move(block));
    }
}

}  // namespace detail

/// Series-based schedule; throws PartitionInfeasible for G < 2 and PairingFailure if
/// no valid block sequence is found within the attempt budget.
inline Schedule realistic_schedule(int teams, int games_per_team, const SeriesDistribution& dist, Rng& rng) {
    validate(dist);
    if (teams < 2) throw Error(ErrorKind::InfeasibleConfig, "a league needs at least 2 teams");
    if (games_per_team < 2) {
        throw Error(ErrorKind::PartitionInfeasible,
                    "G = " + std::to_string(games_per_team) + " cannot be split into 2-, 3- and 4-game series");
    }
    if ((static_cast<long>(teams) * games_per_team) % 2 != 0) {
        throw Error(ErrorKind::InfeasibleConfig, "teams * games must be even");
    }

    for (int attempt = 0; attempt < kRealisticMaxAttempts; ++attempt) {
        auto blocks = detail::try_series_blocks(teams, games_per_team, dist, rng);
        if (blocks.empty()) continue;

        std::vector<Series> flat;
        for (auto& b : blocks) flat.insert(flat.end(), b.begin(), b.end());
        detail::assign_hosts(flat, teams, games_per_team, rng);
        if (!detail::hosts_within_tolerance(flat, teams, games_per_team)) continue;

        Schedule s{teams, {}};
        s.games.reserve(static_cast<std::size_t>(teams) * static_cast<std::size_t>(games_per_team) / 2);
        for (const auto& series : flat) {
            for (int g = 0; g < series.length; ++g) s.games.push_back({series.host, series.guest});
        }
        return s;
    }
    throw Error(ErrorKind::PairingFailure, "could not pair teams into series for T = " + std::to_string(teams) +
                                               ", G = " + std::to_string(games_per_team));
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct ScheduleReport {
    std::vector<int> games;  // per team
    std::vector<int> home;
    std::vector<int> away;
    long self_play = 0;
    long bad_index = 0;
    std::vector<int> wrong_game_count;   // teams whose total differs from G
    std::vector<int> unbalanced;         // teams whose home count misses G/2 by more than the tolerance
    std::map<int, long> series_lengths;  // maximal same-opponent runs, counted per team

    [[nodiscard]] long hard_violations() const noexcept {
        return self_play + bad_index + static_cast<long>(wrong_game_count.size()) + static_cast<long>(unbalanced.size());
    }
};

inline ScheduleReport validate_schedule(const Schedule& s, int teams, int games_per_team, int home_tolerance = 0) {
    ScheduleReport r;
    const auto n = static_cast<std::size_t>(std::max(teams, 0));
    r.games.assign(n, 0);
    r.home.assign(n, 0);
    r.away.assign(n, 0);
    std::vector<int> last_opp(n, -1), run(n, 0);
    auto close_run = [&](std::size_t t) {
        if (run[t] > 0) ++r.series_lengths[run[t]];
    };

    for (const auto& g : s.games) {
        if (g.home < 0 || g.away < 0 || g.home >= teams || g.away >= teams) {
            ++r.bad_index;
            continue;
        }
        if (g.home == g.away) {
            ++r.self_play;
            continue;
        }
        const auto h = static_cast<std::size_t>(g.home), a = static_cast<std::size_t>(g.away);
        ++r.games[h];
        ++r.games[a];
        ++r.home[h];
        ++r.away[a];
        for (auto [t, opp] : {std::pair{h, g.away}, std::pair{a, g.home}}) {
            if (last_opp[t] == opp) {
                ++run[t];
            } else {
                close_run(t);
                last_opp[t] = opp;
                run[t] = 1;
            }
        }
    }
    for (std::size_t t = 0; t < n; ++t) {
        close_run(t);
        if (r.games[t] != games_per_team) r.wrong_game_count.push_back(static_cast<int>(t));
        if (!detail::home_within_tolerance(r.home[t], games_per_team, home_tolerance)) {
            r.unbalanced.push_back(static_cast<int>(t));
        }
    }
    return r;
}

inline void write_schedule_csv(std::ostream& out, const Schedule& s) {
    out << "slot,home_index,away_index\n";
    for (std::size_t i = 0; i < s.games.size(); ++i) out << i << ',' << s.games[i].home << ',' << s.games[i].away << '\n';
}

}  // namespace streakline
