#pragma once

// Subcommands of the streakline CLI, callable in-process for tests.

#include "streakline/streakline.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace streakline::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int {
    kExitOk = 0,
    kExitInputError = 2,
    kExitNumericalFailure = 3,
    kExitInfeasible = 4,
};

int exit_code_for(ErrorKind kind);

/// Reads and concatenates game logs. `format` is "auto", "simple" or "retrosheet";
/// with "auto" every file is sniffed and differing formats are an UnknownFormat error.
std::vector<GameRecord> load_games(const std::vector<std::string>& paths, const std::string& format,
                                   IngestDiagnostics* diagnostics = nullptr);

struct IngestOptions {
    std::vector<std::string> inputs;
    std::string format = "auto";
    std::string output;
};
int cmd_ingest(const IngestOptions& opts, std::ostream& out, std::ostream& err);

struct StreaksOptions {
    std::vector<std::string> inputs;
    std::string format = "auto";
    std::vector<int> orders{2, 3, 4};
    std::string output;  // CSV path; stdout when empty
};
int cmd_streaks(const StreaksOptions& opts, std::ostream& out, std::ostream& err);

struct FitCommandOptions {
    std::vector<std::string> inputs;
    std::string format = "auto";
    std::string mode = "simple";
    std::string output;
    long min_diagonal_games = 20;
};
int cmd_fit(const FitCommandOptions& opts, std::ostream& out, std::ostream& err);

struct SimulateOptions {
    std::string config_path;
    std::string output_dir;
    unsigned threads = 0;
};
int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);

struct EstimateOptions {
    int score_min = 0;
    int score_max = 0;
    int repeats = 3;
};
int cmd_estimate(const EstimateOptions& opts, std::ostream& out, std::ostream& err);

/// "3.90625e-7 (1 in 2,560,000)"
std::string format_estimate(double probability);

/// Thread count after applying the STREAKLINE_THREADS override.
unsigned threads_from_env(unsigned flag_value);

std::string sha256_file(const std::filesystem::path& path);

/// Parses argv and dispatches; returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace streakline::cli
