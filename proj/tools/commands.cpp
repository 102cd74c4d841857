#include "commands.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <unistd.h>

namespace streakline::cli {

namespace fs = std::filesystem;

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::RejectionLimit:
            return kExitNumericalFailure;
        case ErrorKind::InfeasibleConfig:
        case ErrorKind::PartitionInfeasible:
        case ErrorKind::PairingFailure:
            return kExitInfeasible;
        default:
            return kExitInputError;
    }
}

namespace {

std::string first_nonempty_line(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!detail::trim(line).empty()) return line;
    }
    return {};
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::EmptyInput, "cannot open '" + path + "'");
    return in;
}

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::InvalidConfig, "cannot write '" + path.string() + "'");
    out << contents;
    if (!out) throw Error(ErrorKind::InvalidConfig, "failed writing '" + path.string() + "'");
}

std::string with_thousands(long long v) {
    std::string digits = std::to_string(v < 0 ? -v : v);
    std::string out;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i > 0 && (digits.size() - i) % 3 == 0) out.push_back(',');
        out.push_back(digits[i]);
    }
    return v < 0 ? "-" + out : out;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

std::vector<GameRecord> load_games(const std::vector<std::string>& paths, const std::string& format,
                                   IngestDiagnostics* diagnostics) {
    if (paths.empty()) throw Error(ErrorKind::EmptyInput, "no input files");
    std::optional<GameLogFormat> forced;
    if (format != "auto") {
        forced = format_from_name(format);
        if (!forced) throw Error(ErrorKind::UnknownFormat, "unknown format '" + format + "'");
    }

    std::vector<GameLogFormat> formats;
    for (const auto& p : paths) {
        if (forced) {
            formats.push_back(*forced);
            continue;
        }
        auto in = open_input(p);
        const std::string head = first_nonempty_line(in);
        if (head.empty()) {
            formats.push_back(GameLogFormat::SimpleCsv);  // empty files parse to nothing either way
            continue;
        }
        const auto detected = detect_format(head);
        if (!detected) throw Error(ErrorKind::UnknownFormat, "cannot recognise the format of '" + p + "'");
        formats.push_back(*detected);
    }
    if (!forced) {
        for (auto f : formats) {
            if (f != formats.front()) {
                throw Error(ErrorKind::UnknownFormat, "inputs mix SimpleCsv and Retrosheet logs; pass --format");
            }
        }
    }

    std::vector<GameRecord> games;
    IngestDiagnostics total;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        auto in = open_input(paths[i]);
        IngestDiagnostics d;
        try {
            auto part = parse_game_log(in, formats[i], &d);
            games.insert(games.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
        } catch (const ParseError& e) {
            // Re-raise with the file name in front of "line N: ...".
            std::string msg = e.what();
            const std::string prefix = std::string(to_string(e.kind())) + ": ";
            if (msg.starts_with(prefix)) msg.erase(0, prefix.size());
            throw Error(e.kind(), paths[i] + ", " + msg);
        }
        total.lines += d.lines;
        total.records += d.records;
        total.dropped_ties += d.dropped_ties;
    }
    if (diagnostics) *diagnostics = total;
    return games;
}

// ---------------------------------------------------------------------------
// ingest
// ---------------------------------------------------------------------------

int cmd_ingest(const IngestOptions& opts, std::ostream& out, std::ostream& err) {
    IngestDiagnostics diag;
    const auto games = load_games(opts.inputs, opts.format, &diag);
    if (!opts.output.empty()) {
        std::ostringstream csv;
        write_simple_csv(csv, games);
        write_file(opts.output, csv.str());
    }
    if (diag.dropped_ties > 0) err << "warning: dropped " << diag.dropped_ties << " tied games\n";

    std::map<int, std::pair<long, std::set<TeamId>>> per_year;
    for (const auto& g : games) {
        auto& [count, teams] = per_year[year_of(g.date)];
        ++count;
        teams.insert(g.home);
        teams.insert(g.away);
    }
    out << "year,games,teams\n";
    for (const auto& [year, entry] : per_year) out << year << ',' << entry.first << ',' << entry.second.size() << '\n';
    out << "total games: " << games.size() << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------
// streaks
// ---------------------------------------------------------------------------

int cmd_streaks(const StreaksOptions& opts, std::ostream& out, std::ostream& err) {
    if (opts.orders.empty()) throw Error(ErrorKind::InvalidOrder, "no orders given");
    for (int n : opts.orders) check_order(n);
    const auto games = load_games(opts.inputs, opts.format);
    const auto seasons = build_team_seasons(games);

    std::ostringstream csv;
    csv << "year,order,count\n";
    std::map<int, std::map<int, long>> counts;
    for (int n : opts.orders) counts[n] = league_streak_counts(seasons, n);
    std::set<int> years;
    for (const auto& s : seasons) years.insert(s.year);
    for (int y : years) {
        for (int n : opts.orders) csv << y << ',' << n << ',' << counts[n][y] << '\n';
    }
    for (int n : opts.orders) {
        long total = 0;
        for (const auto& [y, c] : counts[n]) total += c;
        csv << "total," << n << ',' << total << '\n';
    }

    std::ostream& summary = opts.output.empty() ? err : out;
    if (opts.output.empty()) {
        out << csv.str();
    } else {
        write_file(opts.output, csv.str());
    }

    summary << "games: " << games.size() << ", team seasons: " << seasons.size() << '\n';
    for (int n : opts.orders) {
        long total = 0;
        std::vector<int> hit_years;
        for (const auto& [y, c] : counts[n]) {
            total += c;
            if (c > 0) hit_years.push_back(y);
        }
        summary << "order " << n << ": " << total << " streaks";
        if (total > 0 && total <= 10) {
            summary << " (years";
            for (int y : hit_years) summary << ' ' << y;
            summary << ')';
        }
        summary << '\n';
    }
    const long pairs = pair_count(seasons);
    summary << "consecutive pairs: " << pairs;
    if (pairs > 0) summary << ", pair probability: " << format_g6(pair_probability(seasons));
    summary << '\n';

    summary << "run totals: selection,mean,std_dev,games\n";
    auto row = [&](const std::string& name, const GameSelector& sel) {
        try {
            const auto st = run_total_stats(seasons, sel);
            summary << "  " << name << ',' << std::fixed << std::setprecision(2) << st.mean << ',' << st.std_dev << ','
                    << st.count << '\n'
                    << std::defaultfloat;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::EmptySelection) throw;
            summary << "  " << name << ",,,0\n";
        }
    };
    if (!games.empty()) row("all", AllGames{});
    row("order-2", InStreakOfOrder{2});
    row("order-3", InStreakOfOrder{3});
    return kExitOk;
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

int cmd_fit(const FitCommandOptions& opts, std::ostream& out, std::ostream& err) {
    const auto games = load_games(opts.inputs, opts.format);
    if (games.empty()) throw Error(ErrorKind::EmptyInput, "no games to fit");

    Json model;
    bool converged = true;
    if (opts.mode == "simple") {
        std::vector<int> home_runs, away_runs;
        for (const auto& g : games) {
            home_runs.push_back(g.home_runs);
            away_runs.push_back(g.away_runs);
        }
        const auto home_emp = EmpiricalRunPmf::from_runs(home_runs);
        const auto away_emp = EmpiricalRunPmf::from_runs(away_runs);
        if (home_emp.folded() + away_emp.folded() > 0) {
            err << "warning: " << home_emp.folded() + away_emp.folded() << " scores above " << kMaxTrackedRuns
                << " runs folded into " << kMaxTrackedRuns << '\n';
        }
        const auto home = fit(home_emp);
        const auto away = fit(away_emp);
        converged = home.converged && away.converged;
        model = simple_model_to_json(home, away, kDefaultMaxRuns);
        out << "home: scale " << format_g6(home.params.scale) << ", location " << format_g6(home.params.location)
            << ", shape " << format_g6(home.params.shape) << ", objective " << format_g6(home.objective) << '\n';
        out << "away: scale " << format_g6(away.params.scale) << ", location " << format_g6(away.params.location)
            << ", shape " << format_g6(away.params.shape) << ", objective " << format_g6(away.objective) << '\n';
    } else if (opts.mode == "bivariate") {
        BivariateFitOptions bopts;
        bopts.min_diagonal_games = opts.min_diagonal_games;
        BivariateFitReport report;
        const auto m = fit_bivariate(games, bopts, &report);
        for (const auto& d : m.diagonals()) converged = converged && d.spec.converged;
        model = to_json(m, &report);
        out << "diagonals: " << report.populated_diagonals << " populated (" << report.fitted_diagonals
            << " fitted, " << report.empirical_diagonals << " empirical) of " << report.structural_diagonals
            << " structural\n";
        out << "home win share: " << format_g6(m.home_win_share()) << '\n';
    } else {
        throw Error(ErrorKind::InvalidConfig, "unknown fit mode '" + opts.mode + "'");
    }

    const std::string text = model.dump(2) + "\n";
    if (opts.output.empty()) {
        out << text;
    } else {
        write_file(opts.output, text);
    }
    if (!converged) {
        err << "error: optimizer did not converge in any restart for at least one component\n";
        return kExitNumericalFailure;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

namespace {

struct SimulationPlan {
    SimConfig sim;
    bool refit_per_year = false;
    std::optional<int> era_order;
    int era_reps = 0;
    std::vector<std::string> inputs;
    std::vector<GameRecord> games;
    std::map<int, std::map<int, long>> historic;  // order -> year -> count
    std::optional<ScoreModel> model;
};

std::vector<std::string> string_list(const Json& j) {
    if (j.is_string()) return {j.get<std::string>()};
    return j.get<std::vector<std::string>>();
}

ScoreModel fit_model(ModelKind kind, const std::vector<GameRecord>& games) {
    if (kind == ModelKind::SimpleWeibull) {
        std::vector<int> h, a;
        for (const auto& g : games) {
            h.push_back(g.home_runs);
            a.push_back(g.away_runs);
        }
        return SimpleWeibullModel::from_params(fit(EmpiricalRunPmf::from_runs(h)).params,
                                               fit(EmpiricalRunPmf::from_runs(a)).params);
    }
    return fit_bivariate(games);
}

SimulationPlan load_plan(const Json& cfg, const fs::path& base) {
    SimulationPlan plan;
    auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? p : (base / p).string(); };
    try {
        auto& sim = plan.sim;
        sim.reps = cfg.value("reps", 10'000);
        const auto model = cfg.value("model", std::string("bivariate"));
        if (model == "simple") {
            sim.model = ModelKind::SimpleWeibull;
        } else if (model == "bivariate") {
            sim.model = ModelKind::BivariateWeibull;
        } else {
            throw Error(ErrorKind::InvalidConfig, "model must be 'simple' or 'bivariate'");
        }
        const auto schedule = cfg.value("schedule", std::string("realistic"));
        if (schedule == "basic") {
            sim.schedule = ScheduleKind::Basic;
        } else if (schedule == "realistic") {
            sim.schedule = ScheduleKind::Realistic;
        } else {
            throw Error(ErrorKind::InvalidConfig, "schedule must be 'basic' or 'realistic'");
        }
        if (cfg.contains("series_dist")) {
            const auto& d = cfg.at("series_dist");
            if (d.is_array()) {
                const auto w = d.get<std::vector<double>>();
                if (w.size() != 3) throw Error(ErrorKind::InvalidConfig, "series_dist needs 3 weights");
                sim.series_dist.weights = {w[0], w[1], w[2]};
            } else {
                sim.series_dist.weights = {d.value("2", 0.0), d.value("3", 0.0), d.value("4", 0.0)};
            }
        }
        if (cfg.contains("orders")) sim.orders = cfg.at("orders").get<std::vector<int>>();
        sim.seed = cfg.value("seed", std::uint64_t{0});
        plan.refit_per_year = cfg.value("refit_per_year", false);

        if (cfg.contains("gamelog")) {
            for (const auto& p : string_list(cfg.at("gamelog"))) plan.inputs.push_back(resolve(p));
            plan.games = load_games(plan.inputs, cfg.value("format", std::string("auto")));
        }
        const int first = cfg.value("first_year", std::numeric_limits<int>::min());
        const int last = cfg.value("last_year", std::numeric_limits<int>::max());
        if (!plan.games.empty()) {
            std::vector<GameRecord> kept;
            for (auto& g : plan.games) {
                if (year_of(g.date) >= first && year_of(g.date) <= last) kept.push_back(std::move(g));
            }
            plan.games = std::move(kept);
            if (plan.games.empty()) throw Error(ErrorKind::EmptyInput, "no games inside first_year..last_year");
        }

        if (cfg.contains("years")) {
            for (const auto& y : cfg.at("years")) {
                YearConfig c;
                c.year = y.at("year").get<int>();
                c.num_teams = y.at("num_teams").get<int>();
                c.games_per_team = y.value("games_per_team", historic_games_per_team(c.year));
                if (c.year >= first && c.year <= last) sim.years.push_back(c);
            }
        } else if (!plan.games.empty()) {
            const auto rule = cfg.value("games_per_team_rule", std::string("mean")) == "max" ? GamesPerTeamRule::Max
                                                                                            : GamesPerTeamRule::RoundedMean;
            sim.years = year_configs_from_data(plan.games, rule);
        } else {
            throw Error(ErrorKind::InvalidConfig, "config needs 'years' or a 'gamelog'");
        }

        if (!plan.games.empty()) {
            const auto seasons = build_team_seasons(plan.games);
            for (int n : sim.orders) {
                auto counts = league_streak_counts(seasons, n);
                for (const auto& y : sim.years) counts.try_emplace(y.year, 0);
                plan.historic[n] = std::move(counts);
            }
        }

        if (cfg.contains("era")) {
            const auto& era = cfg.at("era");
            plan.era_order = era.value("order", 4);
            plan.era_reps = era.value("reps", sim.reps);
        }

        if (cfg.contains("model_file")) {
            std::ifstream in(resolve(cfg.at("model_file").get<std::string>()));
            if (!in) throw Error(ErrorKind::InvalidConfig, "cannot open model_file");
            plan.inputs.push_back(resolve(cfg.at("model_file").get<std::string>()));
            plan.model = model_from_json(Json::parse(in));
        } else if (!plan.games.empty()) {
            if (!plan.refit_per_year) plan.model = fit_model(sim.model, plan.games);
        } else {
            throw Error(ErrorKind::InvalidConfig, "config needs a 'model_file' or a 'gamelog' to fit from");
        }
        if (plan.refit_per_year && plan.games.empty()) {
            throw Error(ErrorKind::InvalidConfig, "refit_per_year needs a 'gamelog'");
        }
        validate(sim);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidConfig, std::string("config: ") + e.what());
    }
    return plan;
}

/// Files are written to a staging directory and moved into place only on success.
class StagedOutput {
public:
    explicit StagedOutput(fs::path target) : target_(std::move(target)) {
        staging_ = target_.string() + ".partial-" + std::to_string(::getpid());
        fs::remove_all(staging_);
        fs::create_directories(staging_);
    }
    StagedOutput(const StagedOutput&) = delete;
    StagedOutput& operator=(const StagedOutput&) = delete;
    ~StagedOutput() {
        std::error_code ec;
        if (!committed_) fs::remove_all(staging_, ec);
    }

    void write(const std::string& name, const std::string& contents) {
        write_file(staging_ / name, contents);
        names_.push_back(name);
    }

    void commit() {
        fs::create_directories(target_);
        for (const auto& n : names_) fs::rename(staging_ / n, target_ / n);
        fs::remove_all(staging_);
        committed_ = true;
    }

private:
    fs::path target_;
    fs::path staging_;
    std::vector<std::string> names_;
    bool committed_ = false;
};

}  // namespace

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
    const auto started = std::chrono::steady_clock::now();
    std::ifstream in(opts.config_path);
    if (!in) throw Error(ErrorKind::InvalidConfig, "cannot open config '" + opts.config_path + "'");
    Json cfg;
    try {
        cfg = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidConfig, std::string("config: ") + e.what());
    }
    if (opts.output_dir.empty()) throw Error(ErrorKind::InvalidConfig, "no output directory");

    auto plan = load_plan(cfg, fs::path(opts.config_path).parent_path());
    plan.sim.threads = opts.threads;
    const auto& sim = plan.sim;

    StagedOutput output{fs::path(opts.output_dir)};

    std::vector<YearStats> stats;
    if (plan.refit_per_year) {
        for (const auto& y : sim.years) {
            std::vector<GameRecord> year_games;
            for (const auto& g : plan.games) {
                if (year_of(g.date) == y.year) year_games.push_back(g);
            }
            const ScoreModel model = fit_model(sim.model, year_games);
            for (auto& s : simulate_year_all_orders(y, sim, model)) {
                if (const auto o = plan.historic.find(s.order); o != plan.historic.end()) {
                    if (const auto h = o->second.find(s.year); h != o->second.end()) s.historic = h->second;
                }
                stats.push_back(s);
            }
        }
    } else {
        stats = simulate_years(sim, *plan.model, plan.historic);
    }

    std::ostringstream csv;
    write_year_stats_csv(csv, stats);
    output.write("year_stats.csv", csv.str());
    output.write("year_stats.json", to_json(std::span<const YearStats>(stats)).dump(2) + "\n");

    if (!plan.historic.empty()) {
        Json reports = Json::array();
        for (int n : sim.orders) {
            std::vector<YearStats> of_order;
            for (const auto& s : stats) {
                if (s.order == n) of_order.push_back(s);
            }
            const auto rep = compare_to_history(of_order, plan.historic.at(n));
            reports.push_back(to_json(rep));
            out << "order " << n << ": historic exceeds mean in " << rep.exceeds_mean << '/' << rep.years_compared
                << " years, exceeds p95 in " << rep.exceeds_p95 << ", below p05 in " << rep.below_p05
                << ", exceeds max in " << rep.exceeds_max << ", below min in " << rep.below_min << '\n';
        }
        output.write("comparison.json", reports.dump(2) + "\n");
    }

    Json era_json;
    if (plan.era_order) {
        if (!plan.model) throw Error(ErrorKind::InvalidConfig, "era mode needs a single model (refit_per_year is off)");
        SimConfig era_cfg = sim;
        era_cfg.reps = plan.era_reps;
        const auto era = simulate_era(era_cfg, *plan.model, *plan.era_order);
        std::ostringstream hist;
        write_era_histogram_csv(hist, era.histogram);
        output.write("era_histogram.csv", hist.str());
        era_json = to_json(era);
        output.write("era.json", era_json.dump(2) + "\n");
        out << "era order " << era.order << ": mean total " << format_g6(era.mean_total)
            << ", per-season occurrence " << format_g6(era.year_hit_fraction) << '\n';
    }

    Json inputs = Json::array();
    for (const auto& p : plan.inputs) inputs.push_back(Json{{"path", p}, {"sha256", sha256_file(p)}});
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    const Json manifest{{"tool", "streakline"},
                        {"version", kToolVersion},
                        {"command", "simulate"},
                        {"config", cfg},
                        {"inputs", inputs},
                        {"seed", sim.seed},
                        {"threads", resolve_threads(sim.threads)},
                        {"started_utc", utc_timestamp()},
                        {"wall_clock_seconds", seconds}};
    output.write("manifest.json", manifest.dump(2) + "\n");
    output.commit();
    err << "wrote " << opts.output_dir << " in " << format_g6(seconds) << " s\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// estimate
// ---------------------------------------------------------------------------

std::string format_estimate(double probability) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", probability);
    std::string p = buf;
    // Drop leading zeros of the exponent: 3.90625e-07 -> 3.90625e-7.
    if (const auto e = p.find('e'); e != std::string::npos) {
        std::size_t digits = e + 2;
        while (digits + 1 < p.size() && p[digits] == '0') p.erase(digits, 1);
    }
    const auto one_in = static_cast<long long>(std::llround(1.0 / probability));
    return p + " (1 in " + with_thousands(one_in) + ")";
}

int cmd_estimate(const EstimateOptions& opts, std::ostream& out, std::ostream&) {
    out << format_estimate(naive_estimate(opts.score_min, opts.score_max, opts.repeats)) << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------
// plumbing
// ---------------------------------------------------------------------------

unsigned threads_from_env(unsigned flag_value) {
    if (const char* env = std::getenv("STREAKLINE_THREADS"); env && *env) {
        const auto v = detail::to_int(env);
        if (v && *v >= 0) return static_cast<unsigned>(*v);
    }
    return flag_value;
}

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::EmptyInput, "cannot open '" + path.string() + "'");
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest, &len);
    std::ostringstream hex;
    for (unsigned i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    return hex.str();
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"streakline: same-score streaks in season-structured sports"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "worker threads (0 = all cores; STREAKLINE_THREADS overrides)");

    IngestOptions ingest;
    auto* c_ingest = app.add_subcommand("ingest", "parse game logs and write a normalized SimpleCsv log");
    c_ingest->add_option("inputs", ingest.inputs, "game log files")->required();
    c_ingest->add_option("--format", ingest.format, "auto | simple | retrosheet");
    c_ingest->add_option("-o,--output", ingest.output, "normalized SimpleCsv output");

    StreaksOptions streaks;
    auto* c_streaks = app.add_subcommand("streaks", "count same-score streaks per year");
    c_streaks->add_option("inputs", streaks.inputs, "game log files")->required();
    c_streaks->add_option("--format", streaks.format, "auto | simple | retrosheet");
    c_streaks->add_option("--orders", streaks.orders, "streak orders")->delimiter(',');
    c_streaks->add_option("-o,--output", streaks.output, "CSV output (default stdout)");

    FitCommandOptions fitopts;
    auto* c_fit = app.add_subcommand("fit", "fit a score model");
    c_fit->add_option("inputs", fitopts.inputs, "game log files")->required();
    c_fit->add_option("--format", fitopts.format, "auto | simple | retrosheet");
    c_fit->add_option("--mode", fitopts.mode, "simple | bivariate");
    c_fit->add_option("--min-diagonal-games", fitopts.min_diagonal_games, "sparser diagonals stay empirical");
    c_fit->add_option("-o,--output", fitopts.output, "model JSON (default stdout)");

    SimulateOptions simopts;
    auto* c_sim = app.add_subcommand("simulate", "run Monte Carlo season ensembles");
    c_sim->add_option("config", simopts.config_path, "simulation config JSON")->required();
    c_sim->add_option("-o,--output", simopts.output_dir, "output directory")->required();

    EstimateOptions est;
    auto* c_est = app.add_subcommand("estimate", "uniform-score estimate of a same-score streak");
    c_est->add_option("min", est.score_min, "lowest plausible score")->required();
    c_est->add_option("max", est.score_max, "highest plausible score")->required();
    c_est->add_option("repeats", est.repeats, "streak length")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitInputError;
    }

    try {
        if (*c_ingest) return cmd_ingest(ingest, out, err);
        if (*c_streaks) return cmd_streaks(streaks, out, err);
        if (*c_fit) return cmd_fit(fitopts, out, err);
        if (*c_sim) {
            simopts.threads = threads_from_env(threads);
            return cmd_simulate(simopts, out, err);
        }
        if (*c_est) return cmd_estimate(est, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }
    return kExitInputError;
}

}  // namespace streakline::cli
