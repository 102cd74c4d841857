#include "commands.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

using namespace streakline;
using namespace streakline::cli;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "streakline");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

const char* kRetroLine =
    "\"20190610\",\"0\",\"Mon\",\"LAA\",\"AL\",66,\"LAN\",\"NL\",66,5,3,\"54\",\"D\",\"\",\"\",\"\",\"LOS03\",53086\n";

}  // namespace

TEST(CliEstimate, PrintsProbabilityAndOdds) {
    EXPECT_EQ(run_cli({"estimate", "50", "89", "3"}).out, "3.90625e-7 (1 in 2,560,000)\n");
    EXPECT_EQ(run_cli({"estimate", "50", "89", "2"}).out, "0.000625 (1 in 1,600)\n");
    EXPECT_EQ(run_cli({"estimate", "5", "5", "3"}).out, "1 (1 in 1)\n");
    EXPECT_EQ(run_cli({"estimate", "9", "5", "3"}).code, kExitInputError);
    EXPECT_EQ(run_cli({"estimate", "1", "40"}).code, kExitInputError);
}

TEST(CliUsage, MissingInputsAreUsageErrors) {
    EXPECT_EQ(run_cli({}).code, kExitInputError);
    EXPECT_EQ(run_cli({"ingest"}).code, kExitInputError);
    EXPECT_EQ(run_cli({"bogus"}).code, kExitInputError);
    EXPECT_EQ(run_cli({"--help"}).code, kExitOk);
}

TEST(CliIngest, NormalisesAndSummarises) {
    oracle::TempDir dir;
    const auto retro = dir.write("gl2019.txt", std::string(kRetroLine) + kRetroLine);
    const auto out_csv = dir.file("norm.csv");
    const auto r = run_cli({"ingest", retro, "-o", out_csv});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(oracle::slurp(out_csv),
              "date,seq,home,away,home_runs,away_runs\n2019-06-10,0,LAN,LAA,3,5\n2019-06-10,0,LAN,LAA,3,5\n");
    EXPECT_NE(r.out.find("2019,2,2"), std::string::npos) << r.out;
}

TEST(CliIngest, MixedFormatsNeedAFlag) {
    oracle::TempDir dir;
    const auto retro = dir.write("a.txt", kRetroLine);
    const auto simple = dir.write("b.csv", "date,seq,home,away,home_runs,away_runs\n2019-06-11,0,LAN,LAA,3,5\n");
    const auto r = run_cli({"ingest", retro, simple});
    EXPECT_EQ(r.code, kExitInputError);
    EXPECT_NE(r.err.find("unknown-format"), std::string::npos) << r.err;
}

TEST(CliIngest, ParseErrorsNameTheLine) {
    oracle::TempDir dir;
    const auto bad = dir.write("bad.csv", "date,seq,home,away,home_runs,away_runs\n2019-06-11,0,LAN,LAA,4,4\n");
    const auto r = run_cli({"ingest", bad});
    EXPECT_EQ(r.code, kExitInputError);
    EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("bad.csv"), std::string::npos) << r.err;
}

TEST(CliStreaks, CountsAndTotals) {
    oracle::TempDir dir;
    const auto log = dir.write("g.csv",
                               "date,seq,home,away,home_runs,away_runs\n"
                               "2019-06-10,0,LAD,LAA,3,5\n"
                               "2019-06-11,0,LAD,LAA,3,5\n"
                               "2019-06-12,0,LAA,TB,5,3\n");
    const auto r = run_cli({"streaks", log, "--orders", "2,3"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(r.out, "year,order,count\n2019,2,3\n2019,3,1\ntotal,2,3\ntotal,3,1\n");
    EXPECT_NE(r.err.find("order 3: 1 streaks (years 2019)"), std::string::npos) << r.err;

    EXPECT_EQ(run_cli({"streaks", log, "--orders", "1"}).code, kExitInputError);
}

TEST(CliFit, SimpleAndBivariate) {
    oracle::TempDir dir;
    const auto log = dir.write("g.csv", oracle::synthetic_league_csv(12, 150, 2001, 2, 8));
    const auto simple = run_cli({"fit", log, "--mode", "simple", "-o", dir.file("simple.json")});
    ASSERT_EQ(simple.code, kExitOk) << simple.err;
    const auto j = Json::parse(oracle::slurp(dir.file("simple.json")));
    EXPECT_LT(j.at("home").at("objective").get<double>(), 5e-4);
    EXPECT_LT(j.at("away").at("objective").get<double>(), 5e-4);

    std::string tiny = "date,seq,home,away,home_runs,away_runs\n";
    for (int i = 0; i < 10; ++i) tiny += "2019-06-1" + std::to_string(i) + ",0,AAA,BBB," + std::to_string(i) + ",10\n";
    const auto tiny_log = dir.write("tiny.csv", tiny);
    const auto biv = run_cli({"fit", tiny_log, "--mode", "bivariate", "-o", dir.file("biv.json")});
    ASSERT_EQ(biv.code, kExitOk) << biv.err;
    const auto b = Json::parse(oracle::slurp(dir.file("biv.json")));
    EXPECT_EQ(b.at("diagnostics").at("fitted_diagonals"), 0);
    EXPECT_EQ(b.at("diagnostics").at("empirical_diagonals"), 10);
    EXPECT_EQ(run_cli({"fit", tiny_log, "--mode", "trivariate"}).code, kExitInputError);
}

TEST(CliSimulate, DeterministicOutputsAndManifest) {
    oracle::TempDir dir;
    dir.write("g.csv", oracle::synthetic_league_csv(8, 60, 2001, 2, 8));
    const auto cfg = dir.write("sim.json", R"({"reps": 30, "model": "bivariate", "schedule": "realistic",
        "gamelog": "g.csv", "seed": 11, "era": {"order": 3, "reps": 20}})");
    const auto a = run_cli({"simulate", cfg, "-o", dir.file("a")});
    ASSERT_EQ(a.code, kExitOk) << a.err;
    const auto b = run_cli({"--threads", "3", "simulate", cfg, "-o", dir.file("b")});
    ASSERT_EQ(b.code, kExitOk) << b.err;
    for (const char* f : {"year_stats.csv", "era_histogram.csv", "year_stats.json", "comparison.json"}) {
        const auto fa = oracle::slurp(dir.path() / "a" / f);
        EXPECT_FALSE(fa.empty()) << f;
        EXPECT_EQ(fa, oracle::slurp(dir.path() / "b" / f)) << f;
    }
    const auto manifest = Json::parse(oracle::slurp(dir.path() / "a" / "manifest.json"));
    EXPECT_EQ(manifest.at("seed"), 11);
    EXPECT_EQ(manifest.at("version"), kToolVersion);
    EXPECT_EQ(manifest.at("config").at("reps"), 30);
    ASSERT_EQ(manifest.at("inputs").size(), 1u);
    EXPECT_EQ(manifest.at("inputs")[0].at("sha256").get<std::string>().size(), 64u);
}

TEST(CliSimulate, SingleReplicateFromModelFile) {
    oracle::TempDir dir;
    dir.write("model.json", R"({"type":"simple","home":{"scale":4.9,"location":-0.3,"shape":1.65},
        "away":{"scale":4.6,"location":-0.25,"shape":1.7}})");
    const auto cfg = dir.write("sim.json", R"({"reps": 1, "model": "simple", "schedule": "basic",
        "model_file": "model.json", "seed": 3, "years": [{"year": 1962, "num_teams": 20}]})");
    ASSERT_EQ(run_cli({"simulate", cfg, "-o", dir.file("a")}).code, kExitOk);
    ASSERT_EQ(run_cli({"simulate", cfg, "-o", dir.file("b")}).code, kExitOk);
    const auto csv = oracle::slurp(dir.path() / "a" / "year_stats.csv");
    EXPECT_EQ(csv, oracle::slurp(dir.path() / "b" / "year_stats.csv"));
    EXPECT_EQ(csv.rfind("year,order,min,p05,mean,p95,max,historic\n1962,2,", 0), 0u) << csv;
    EXPECT_FALSE(std::filesystem::exists(dir.path() / "a" / "comparison.json"));
}

TEST(CliSimulate, InfeasibleConfigLeavesNoOutput) {
    oracle::TempDir dir;
    dir.write("model.json", R"({"type":"simple","home":{"scale":4.9,"location":-0.3,"shape":1.65},
        "away":{"scale":4.6,"location":-0.25,"shape":1.7}})");
    const auto cfg = dir.write("sim.json", R"({"reps": 2, "model": "simple", "schedule": "realistic",
        "model_file": "model.json", "years": [{"year": 1950, "num_teams": 3, "games_per_team": 3}]})");
    const auto r = run_cli({"simulate", cfg, "-o", dir.file("out")});
    EXPECT_EQ(r.code, kExitInfeasible) << r.err;
    EXPECT_FALSE(std::filesystem::exists(dir.path() / "out"));
    for (const auto& entry : std::filesystem::directory_iterator(dir.path())) {
        EXPECT_EQ(entry.path().filename().string().find("out.partial"), std::string::npos);
    }
}

TEST(CliSimulate, BadConfigIsAnInputError) {
    oracle::TempDir dir;
    const auto cfg = dir.write("sim.json", R"({"reps": 2, "model": "quadratic"})");
    EXPECT_EQ(run_cli({"simulate", cfg, "-o", dir.file("out")}).code, kExitInputError);
    const auto broken = dir.write("broken.json", "{not json");
    EXPECT_EQ(run_cli({"simulate", broken, "-o", dir.file("out")}).code, kExitInputError);
}

TEST(CliPlumbing, ThreadOverrideAndDigest) {
    ::setenv("STREAKLINE_THREADS", "3", 1);
    EXPECT_EQ(threads_from_env(8), 3u);
    ::unsetenv("STREAKLINE_THREADS");
    EXPECT_EQ(threads_from_env(8), 8u);

    oracle::TempDir dir;
    EXPECT_EQ(sha256_file(dir.write("abc.txt", "abc")),
              "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    EXPECT_EQ(exit_code_for(ErrorKind::PairingFailure), kExitInfeasible);
    EXPECT_EQ(exit_code_for(ErrorKind::RejectionLimit), kExitNumericalFailure);
    EXPECT_EQ(exit_code_for(ErrorKind::MalformedLine), kExitInputError);
}
