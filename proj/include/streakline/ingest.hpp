#pragma once

// Game-log parsing and assembly of per-team seasons.
//
// Two input formats are understood:
//   SimpleCsv         date,seq,home,away,home_runs,away_runs  (ISO dates, header row)
//   RetrosheetGameLog positional game logs; 1-based fields used:
//                     1 date (yyyymmdd), 2 game number, 4 visitor, 7 home,
//                     10 visitor score, 11 home score
//
// SimpleCsv rejects tied scores. Retrosheet logs contain a few historical ties;
// those rows are dropped and counted in IngestDiagnostics.

#include "streakline/core.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace streakline {

enum class GameLogFormat { SimpleCsv, RetrosheetGameLog };

inline constexpr std::string_view kSimpleCsvHeader = "date,seq,home,away,home_runs,away_runs";

struct IngestDiagnostics {
    std::size_t lines = 0;
    std::size_t records = 0;
    std::size_t dropped_ties = 0;
};

namespace detail {

/// Splits one CSV line, honouring double quotes (Retrosheet quotes every text field).
inline std::vector<std::string> split_csv(std::string_view line) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    out.push_back(std::move(field));
    return out;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline std::optional<int> to_int(std::string_view s) {
    s = trim(s);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return value;
}

inline std::optional<Date> parse_iso_date(std::string_view s) {
    s = trim(s);
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    const auto y = to_int(s.substr(0, 4));
    const auto m = to_int(s.substr(5, 2));
    const auto d = to_int(s.substr(8, 2));
    if (!y || !m || !d || *m < 1 || *d < 1) return std::nullopt;
    Date date{std::chrono::year{*y}, std::chrono::month{static_cast<unsigned>(*m)},
              std::chrono::day{static_cast<unsigned>(*d)}};
    if (!date.ok()) return std::nullopt;
    return date;
}

inline std::optional<Date> parse_compact_date(std::string_view s) {
    s = trim(s);
    if (s.size() != 8) return std::nullopt;
    const auto y = to_int(s.substr(0, 4));
    const auto m = to_int(s.substr(4, 2));
    const auto d = to_int(s.substr(6, 2));
    if (!y || !m || !d || *m < 1 || *d < 1) return std::nullopt;
    Date date{std::chrono::year{*y}, std::chrono::month{static_cast<unsigned>(*m)},
              std::chrono::day{static_cast<unsigned>(*d)}};
    if (!date.ok()) return std::nullopt;
    return date;
}

inline int parse_runs(std::string_view s, std::size_t line_no, const char* what) {
    const auto v = to_int(s);
    if (!v) {
        throw ParseError(ErrorKind::MalformedLine, line_no, std::string("bad ") + what);
    }
    if (*v < 0 || *v > kMaxRunsPerGame) {
        throw ParseError(ErrorKind::MalformedLine, line_no, std::string(what) + " outside [0, 99]");
    }
    return *v;
}

/// Retrosheet game numbers: 0 single game, 1/2 (or A/B) halves of a doubleheader.
inline std::optional<int> parse_game_number(std::string_view s) {
    s = trim(s);
    if (s.empty()) return 0;
    if (s == "A") return 1;
    if (s == "B") return 2;
    const auto v = to_int(s);
    if (!v || *v < 0) return std::nullopt;
    return *v;
}

inline bool getline_stripped(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

}  // namespace detail

/// Guesses the format from the first non-empty line of a source.
inline std::optional<GameLogFormat> detect_format(std::string_view first_line) {
    const auto line = detail::trim(first_line);
    if (line.empty()) return std::nullopt;
    if (line == kSimpleCsvHeader) return GameLogFormat::SimpleCsv;
    const auto fields = detail::split_csv(line);
    if (fields.size() >= 11 && detail::parse_compact_date(fields[0])) {
        return GameLogFormat::RetrosheetGameLog;
    }
    return std::nullopt;
}

inline std::optional<GameLogFormat> format_from_name(std::string_view name) {
    if (name == "simple" || name == "simple-csv" || name == "csv") return GameLogFormat::SimpleCsv;
    if (name == "retrosheet") return GameLogFormat::RetrosheetGameLog;
    return std::nullopt;
}

/// Parses a whole game log, preserving source order.
inline std::vector<GameRecord> parse_game_log(std::istream& in, GameLogFormat format,
                                              IngestDiagnostics* diagnostics = nullptr) {
    std::vector<GameRecord> games;
    IngestDiagnostics diag;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;

    while (detail::getline_stripped(in, line)) {
        ++line_no;
        ++diag.lines;
        if (detail::trim(line).empty()) continue;

        if (format == GameLogFormat::SimpleCsv) {
            if (!header_seen) {
                if (detail::trim(line) != kSimpleCsvHeader) {
                    throw ParseError(ErrorKind::MalformedLine, line_no,
                                     "expected header '" + std::string(kSimpleCsvHeader) + "'");
                }
                header_seen = true;
                continue;
            }
            const auto f = detail::split_csv(line);
            if (f.size() != 6) {
                throw ParseError(ErrorKind::MalformedLine, line_no,
                                 "expected 6 fields, got " + std::to_string(f.size()));
            }
            const auto date = detail::parse_iso_date(f[0]);
            if (!date) throw ParseError(ErrorKind::MalformedLine, line_no, "bad date '" + f[0] + "'");
            const auto seq = detail::to_int(f[1]);
            if (!seq || *seq < 0) throw ParseError(ErrorKind::MalformedLine, line_no, "bad seq");
            if (detail::trim(f[2]).empty() || detail::trim(f[3]).empty()) {
                throw ParseError(ErrorKind::MalformedLine, line_no, "empty team id");
            }
            GameRecord g{*date,
                         *seq,
                         TeamId(f[2]),
                         TeamId(f[3]),
                         detail::parse_runs(f[4], line_no, "home_runs"),
                         detail::parse_runs(f[5], line_no, "away_runs")};
            if (g.home == g.away) throw ParseError(ErrorKind::MalformedLine, line_no, "team plays itself");
            if (g.home_runs == g.away_runs) {
                throw ParseError(ErrorKind::TieScore, line_no, "tied score " + std::to_string(g.home_runs));
            }
            games.push_back(std::move(g));
        } else {
            const auto f = detail::split_csv(line);
            if (f.size() < 11) {
                throw ParseError(ErrorKind::MalformedLine, line_no,
                                 "expected at least 11 fields, got " + std::to_string(f.size()));
            }
            const auto date = detail::parse_compact_date(f[0]);
            if (!date) throw ParseError(ErrorKind::MalformedLine, line_no, "bad date '" + f[0] + "'");
            const auto seq = detail::parse_game_number(f[1]);
            if (!seq) throw ParseError(ErrorKind::MalformedLine, line_no, "bad game number");
            if (detail::trim(f[3]).empty() || detail::trim(f[6]).empty()) {
                throw ParseError(ErrorKind::MalformedLine, line_no, "empty team id");
            }
            GameRecord g{*date,
                         *seq,
                         TeamId(f[6]),
                         TeamId(f[3]),
                         detail::parse_runs(f[10], line_no, "home score"),
                         detail::parse_runs(f[9], line_no, "visitor score")};
            if (g.home == g.away) throw ParseError(ErrorKind::MalformedLine, line_no, "team plays itself");
            if (g.home_runs == g.away_runs) {
                ++diag.dropped_ties;
                continue;
            }
            games.push_back(std::move(g));
        }
    }
    diag.records = games.size();
    if (diagnostics) *diagnostics = diag;
    return games;
}

inline void write_simple_csv(std::ostream& out, const std::vector<GameRecord>& games) {
    out << kSimpleCsvHeader << '\n';
    for (const auto& g : games) {
        out << to_iso(g.date) << ',' << g.seq << ',' << g.home.str() << ',' << g.away.str() << ','
            << g.home_runs << ',' << g.away_runs << '\n';
    }
}

namespace detail {

inline bool view_less(const TeamGameView& a, const TeamGameView& b) {
    if (a.date != b.date) return a.date < b.date;
    if (a.seq != b.seq) return a.seq < b.seq;
    if (a.is_home != b.is_home) return a.is_home < b.is_home;
    if (a.opponent != b.opponent) return a.opponent < b.opponent;
    if (a.scored != b.scored) return a.scored < b.scored;
    return a.allowed < b.allowed;
}

}  // namespace detail

/// One TeamSeason per (team, year), ordered by (year, team); games sorted by (date, seq).
inline std::vector<TeamSeason> build_team_seasons(const std::vector<GameRecord>& games) {
    std::map<std::pair<int, TeamId>, std::vector<TeamGameView>> buckets;
    for (const auto& g : games) {
        validate(g);
        const int year = year_of(g.date);
        buckets[{year, g.home}].push_back(team_perspective(g, g.home));
        buckets[{year, g.away}].push_back(team_perspective(g, g.away));
    }
    std::vector<TeamSeason> seasons;
    seasons.reserve(buckets.size());
    for (auto& [key, views] : buckets) {
        std::sort(views.begin(), views.end(), detail::view_less);
        seasons.push_back(TeamSeason{key.second, key.first, std::move(views)});
    }
    return seasons;
}

enum class GamesPerTeamRule { RoundedMean, Max };

/// Derives (teams, games per team) for every year present in the log.
///
/// If the rounded games-per-team value makes teams * games odd it is lowered by one
/// so that the league total stays integral.
inline std::vector<YearConfig> year_configs_from_data(const std::vector<GameRecord>& games,
                                                      GamesPerTeamRule rule = GamesPerTeamRule::RoundedMean) {
    if (games.empty()) {
        throw Error(ErrorKind::EmptyInput, "no games to derive year configurations from");
    }
    std::map<int, std::map<TeamId, int>> per_year;
    for (const auto& g : games) {
        auto& teams = per_year[year_of(g.date)];
        ++teams[g.home];
        ++teams[g.away];
    }
    std::vector<YearConfig> out;
    for (const auto& [year, teams] : per_year) {
        long total = 0;
        int longest = 0;
        for (const auto& [team, n] : teams) {
            total += n;
            longest = std::max(longest, n);
        }
        const int t = static_cast<int>(teams.size());
        int g = rule == GamesPerTeamRule::Max
                    ? longest
                    : static_cast<int>(std::lround(static_cast<double>(total) / t));
        if ((static_cast<long>(t) * g) % 2 != 0) --g;
        out.push_back({year, t, std::max(g, 1)});
    }
    return out;
}

}  // namespace streakline
