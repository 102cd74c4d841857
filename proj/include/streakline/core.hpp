#pragma once

// Domain types shared by every streakline module.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace streakline {

enum class ErrorKind {
    TeamNotInGame,
    InvalidGame,
    MalformedLine,
    TieScore,
    UnknownFormat,
    InvalidOrder,
    DivisionByZero,
    EmptySelection,
    EmptyInput,
    InvalidParams,
    NegativeRun,
    InvalidInit,
    RejectionLimit,
    InfeasibleConfig,
    PartitionInfeasible,
    PairingFailure,
    DisjointYears,
    InvalidRange,
    InvalidConfig,
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::TeamNotInGame: return "team-not-in-game";
        case ErrorKind::InvalidGame: return "invalid-game";
        case ErrorKind::MalformedLine: return "malformed-line";
        case ErrorKind::TieScore: return "tie-score";
        case ErrorKind::UnknownFormat: return "unknown-format";
        case ErrorKind::InvalidOrder: return "invalid-order";
        case ErrorKind::DivisionByZero: return "division-by-zero";
        case ErrorKind::EmptySelection: return "empty-selection";
        case ErrorKind::EmptyInput: return "empty-input";
        case ErrorKind::InvalidParams: return "invalid-params";
        case ErrorKind::NegativeRun: return "negative-run";
        case ErrorKind::InvalidInit: return "invalid-init";
        case ErrorKind::RejectionLimit: return "rejection-limit";
        case ErrorKind::InfeasibleConfig: return "infeasible-config";
        case ErrorKind::PartitionInfeasible: return "partition-infeasible";
        case ErrorKind::PairingFailure: return "pairing-failure";
        case ErrorKind::DisjointYears: return "disjoint-years";
        case ErrorKind::InvalidRange: return "invalid-range";
        case ErrorKind::InvalidConfig: return "invalid-config";
    }
    return "unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Parse failures additionally remember the 1-based source line.
class ParseError : public Error {
public:
    ParseError(ErrorKind kind, std::size_t line, const std::string& what)
        : Error(kind, "line " + std::to_string(line) + ": " + what), line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// ---------------------------------------------------------------------------
// TeamId
// ---------------------------------------------------------------------------

/// Opaque team token, stored upper-cased. Equality is exact token equality.
class TeamId {
public:
    TeamId() = default;

    explicit TeamId(std::string_view token) {
        for (char c : token) {
            if (!std::isspace(static_cast<unsigned char>(c))) {
                value_.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
            }
        }
        if (value_.empty()) {
            throw Error(ErrorKind::InvalidGame, "empty team id");
        }
    }

    [[nodiscard]] const std::string& str() const noexcept { return value_; }

    friend auto operator<=>(const TeamId&, const TeamId&) = default;
    friend bool operator==(const TeamId&, const TeamId&) = default;

private:
    std::string value_;
};

// ---------------------------------------------------------------------------
// Dates
// ---------------------------------------------------------------------------

using Date = std::chrono::year_month_day;

inline Date make_date(int y, unsigned m, unsigned d) {
    Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!date.ok()) {
        throw Error(ErrorKind::InvalidGame, "invalid calendar date");
    }
    return date;
}

inline int year_of(const Date& d) { return static_cast<int>(d.year()); }

inline std::string to_iso(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

// ---------------------------------------------------------------------------
// Games
// ---------------------------------------------------------------------------

inline constexpr int kMaxRunsPerGame = 99;

struct GameRecord {
    Date date{};
    int seq = 0;  // doubleheader disambiguation within one date
    TeamId home;
    TeamId away;
    int home_runs = 0;
    int away_runs = 0;

    friend bool operator==(const GameRecord&, const GameRecord&) = default;
};

/// Throws InvalidGame / TieScore when a record breaks the game invariants.
inline void validate(const GameRecord& g) {
    if (!g.date.ok()) {
        throw Error(ErrorKind::InvalidGame, "invalid date");
    }
    if (g.seq < 0) {
        throw Error(ErrorKind::InvalidGame, "negative sequence number");
    }
    if (g.home == g.away) {
        throw Error(ErrorKind::InvalidGame, "team " + g.home.str() + " cannot play itself");
    }
    if (g.home_runs < 0 || g.away_runs < 0 || g.home_runs > kMaxRunsPerGame ||
        g.away_runs > kMaxRunsPerGame) {
        throw Error(ErrorKind::InvalidGame, "run total outside [0, 99]");
    }
    if (g.home_runs == g.away_runs) {
        throw Error(ErrorKind::TieScore, "tied score " + std::to_string(g.home_runs));
    }
}

/// Identifies one physical game regardless of which team is looking at it.
struct GameKey {
    Date date{};
    int seq = 0;
    TeamId home;
    TeamId away;

    friend auto operator<=>(const GameKey&, const GameKey&) = default;
};

inline GameKey key_of(const GameRecord& g) { return {g.date, g.seq, g.home, g.away}; }

/// One game seen from one participant.
struct TeamGameView {
    int scored = 0;
    int allowed = 0;
    TeamId opponent;
    bool is_home = false;
    Date date{};
    int seq = 0;

    friend bool operator==(const TeamGameView&, const TeamGameView&) = default;

    [[nodiscard]] bool same_score(const TeamGameView& other) const noexcept {
        return scored == other.scored && allowed == other.allowed;
    }
};

inline TeamGameView team_perspective(const GameRecord& game, const TeamId& team) {
    if (team == game.home) {
        return {game.home_runs, game.away_runs, game.away, true, game.date, game.seq};
    }
    if (team == game.away) {
        return {game.away_runs, game.home_runs, game.home, false, game.date, game.seq};
    }
    throw Error(ErrorKind::TeamNotInGame,
                team.str() + " did not play " + game.away.str() + " @ " + game.home.str());
}

/// Recovers the GameKey of the game behind a view owned by `team`.
inline GameKey key_of(const TeamGameView& v, const TeamId& team) {
    return v.is_home ? GameKey{v.date, v.seq, team, v.opponent}
                     : GameKey{v.date, v.seq, v.opponent, team};
}

/// A team's chronologically ordered season, sorted by (date, seq).
struct TeamSeason {
    TeamId team;
    int year = 0;
    std::vector<TeamGameView> games;

    friend bool operator==(const TeamSeason&, const TeamSeason&) = default;
};

struct YearConfig {
    int year = 0;
    int num_teams = 0;
    int games_per_team = 0;

    friend bool operator==(const YearConfig&, const YearConfig&) = default;

    [[nodiscard]] long total_games() const noexcept {
        return static_cast<long>(num_teams) * games_per_team / 2;
    }
};

inline void validate(const YearConfig& c) {
    if (c.num_teams < 2) {
        throw Error(ErrorKind::InfeasibleConfig, "year " + std::to_string(c.year) + ": need at least 2 teams");
    }
    if (c.games_per_team < 1) {
        throw Error(ErrorKind::InfeasibleConfig, "year " + std::to_string(c.year) + ": need at least 1 game");
    }
    if ((static_cast<long>(c.num_teams) * c.games_per_team) % 2 != 0) {
        throw Error(ErrorKind::InfeasibleConfig,
                    "year " + std::to_string(c.year) + ": teams * games must be even");
    }
}

/// Era rule for the length of a season when no data is available.
inline int historic_games_per_team(int year) {
    if (year <= 1903) return 140;
    if (year <= 1960) return 154;
    return 162;
}

}  // namespace streakline
