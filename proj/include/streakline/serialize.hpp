#pragma once

// JSON and CSV forms of fitted models and simulation results.
//
// CSV numbers use six significant digits ("%.6g") so output files can be diffed byte-wise.

#include "streakline/models.hpp"
#include "streakline/sim.hpp"
#include "streakline/weibull.hpp"

#include <json.hpp>

#include <cstdio>
#include <ostream>
#include <string>

namespace streakline {

using Json = nlohmann::ordered_json;

inline std::string format_g6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Weibull parameters
// ---------------------------------------------------------------------------

inline Json to_json(const WeibullParams& p, std::optional<double> objective = std::nullopt) {
    Json j{{"scale", p.scale}, {"location", p.location}, {"shape", p.shape}};
    if (objective) j["objective"] = *objective;
    return j;
}

inline Json to_json(const FitResult& r) {
    Json j = to_json(r.params, r.objective);
    j["converged"] = r.converged;
    j["evaluations"] = r.evaluations;
    return j;
}

inline WeibullParams weibull_from_json(const Json& j) {
    try {
        WeibullParams p{j.at("scale").get<double>(), j.at("location").get<double>(), j.at("shape").get<double>()};
        validate(p);
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidConfig, std::string("Weibull parameters: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Score models
// ---------------------------------------------------------------------------

inline Json simple_model_to_json(const FitResult& home, const FitResult& away, int max_runs) {
    return Json{{"type", "simple"}, {"max_runs", max_runs}, {"home", to_json(home)}, {"away", to_json(away)}};
}

inline Json to_json(const BivariateScoreModel& m, const BivariateFitReport* report = nullptr) {
    Json diagonals = Json::array();
    for (const auto& d : m.diagonals()) {
        Json j{{"k", d.spec.k}, {"weight", d.spec.weight}, {"games", d.spec.games}};
        if (d.spec.params) {
            j["params"] = to_json(*d.spec.params, d.spec.objective);
            j["converged"] = d.spec.converged;
        } else {
            j["empirical_pmf"] = d.spec.empirical_pmf;
        }
        diagonals.push_back(std::move(j));
    }
    Json out{{"type", "bivariate"}, {"max_runs", m.max_runs()}, {"diagonals", std::move(diagonals)}};
    out["home_win_share"] = m.home_win_share();
    if (report) {
        out["diagnostics"] = Json{{"games", report->games},
                                  {"folded_games", report->folded_games},
                                  {"populated_diagonals", report->populated_diagonals},
                                  {"fitted_diagonals", report->fitted_diagonals},
                                  {"empirical_diagonals", report->empirical_diagonals},
                                  {"structural_diagonals", report->structural_diagonals}};
    }
    return out;
}

inline ScoreModel model_from_json(const Json& j) {
    try {
        const auto type = j.at("type").get<std::string>();
        const int max_runs = j.value("max_runs", kDefaultMaxRuns);
        if (type == "simple") {
            if (j.contains("home_pmf")) {
                return SimpleWeibullModel::from_pmfs(j.at("home_pmf").get<std::vector<double>>(),
                                                     j.at("away_pmf").get<std::vector<double>>());
            }
            return SimpleWeibullModel::from_params(weibull_from_json(j.at("home")), weibull_from_json(j.at("away")),
                                                   max_runs);
        }
        if (type == "bivariate") {
            std::vector<DiagonalSpec> specs;
            for (const auto& d : j.at("diagonals")) {
                DiagonalSpec s;
                s.k = d.at("k").get<int>();
                s.weight = d.at("weight").get<double>();
                s.games = d.value("games", 0L);
                if (d.contains("params")) {
                    s.params = weibull_from_json(d.at("params"));
                    s.objective = d.at("params").value("objective", 0.0);
                    s.converged = d.value("converged", true);
                } else {
                    s.empirical_pmf = d.at("empirical_pmf").get<std::vector<double>>();
                }
                specs.push_back(std::move(s));
            }
            return BivariateScoreModel::from_diagonals(std::move(specs), max_runs);
        }
        throw Error(ErrorKind::InvalidConfig, "unknown model type '" + type + "'");
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidConfig, std::string("model JSON: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Simulation results
// ---------------------------------------------------------------------------

inline void write_year_stats_csv(std::ostream& out, std::span<const YearStats> stats) {
    out << "year,order,min,p05,mean,p95,max,historic\n";
    for (const auto& s : stats) {
        out << s.year << ',' << s.order << ',' << format_g6(s.min) << ',' << format_g6(s.p05) << ','
            << format_g6(s.mean) << ',' << format_g6(s.p95) << ',' << format_g6(s.max) << ',';
        if (s.historic) out << *s.historic;
        out << '\n';
    }
}

inline Json to_json(std::span<const YearStats> stats) {
    Json arr = Json::array();
    for (const auto& s : stats) {
        Json j{{"year", s.year}, {"order", s.order}, {"min", s.min}, {"p05", s.p05},
               {"mean", s.mean}, {"p95", s.p95},     {"max", s.max}};
        j["historic"] = s.historic ? Json(*s.historic) : Json(nullptr);
        arr.push_back(std::move(j));
    }
    return arr;
}

inline void write_era_histogram_csv(std::ostream& out, const EraHistogram& h) {
    out << "count,fraction\n";
    for (const auto& [count, fraction] : h.fractions) out << count << ',' << format_g6(fraction) << '\n';
}

inline Json to_json(const EraResult& r) {
    Json hist = Json::array();
    for (const auto& [count, fraction] : r.histogram.fractions) hist.push_back(Json{{"count", count}, {"fraction", fraction}});
    return Json{{"order", r.order},
                {"reps", r.reps},
                {"years", r.years},
                {"mean_total", r.mean_total},
                {"year_hit_fraction", r.year_hit_fraction},
                {"histogram", std::move(hist)}};
}

inline Json to_json(const ComparisonReport& r) {
    auto pct = [&](int n) { return r.years_compared > 0 ? 100.0 * n / r.years_compared : 0.0; };
    return Json{{"order", r.order},
                {"years_compared", r.years_compared},
                {"exceeds_mean", r.exceeds_mean},
                {"exceeds_mean_pct", pct(r.exceeds_mean)},
                {"exceeds_p95", r.exceeds_p95},
                {"exceeds_p95_pct", pct(r.exceeds_p95)},
                {"below_p05", r.below_p05},
                {"below_p05_pct", pct(r.below_p05)},
                {"exceeds_max", r.exceeds_max},
                {"below_min", r.below_min}};
}

}  // namespace streakline
